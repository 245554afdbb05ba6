#include "sleec/loop/record.hpp"

#include <sstream>

namespace sleec::loop {

nlohmann::json EnforcementRecord::to_json() const {
  nlohmann::json j{
      {"case", case_id},
      {"t_probe", t_probe},
      {"t_conditions_published", t_conditions_published},
      {"t_enforcer_in", t_enforcer_in},
      {"t_server_in", t_server_in},
      {"t_server_out", t_server_out},
      {"t_enforcer_out", t_enforcer_out},
      {"t_tasks_dispatched", t_tasks_dispatched},
      {"server_us", server_us},
      {"status", status},
      {"capabilities", capabilities},
  };
  if (matched)
    j["matched"] = *matched;
  else
    j["matched"] = nullptr;
  return j;
}

const char* EnforcementRecord::csv_header() {
  return "case,t_probe,t_conditions_published,t_enforcer_in,t_server_in,t_server_out,"
         "t_enforcer_out,t_tasks_dispatched,server_us,status,matched";
}

std::string EnforcementRecord::csv_row() const {
  std::ostringstream os;
  os << case_id << ',' << t_probe << ',' << t_conditions_published << ',' << t_enforcer_in
     << ',' << t_server_in << ',' << t_server_out << ',' << t_enforcer_out << ','
     << t_tasks_dispatched << ',' << server_us << ',' << status << ','
     << (matched ? (*matched ? "true" : "false") : "");
  return os.str();
}

void RecordSink::add(EnforcementRecord record) {
  std::lock_guard lock(mutex_);
  if (stream_) *stream_ << record.to_json().dump() << "\n" << std::flush;
  records_.push_back(std::move(record));
}

std::vector<EnforcementRecord> RecordSink::records() const {
  std::lock_guard lock(mutex_);
  return records_;
}

std::size_t RecordSink::size() const {
  std::lock_guard lock(mutex_);
  return records_.size();
}

void RecordSink::clear() {
  std::lock_guard lock(mutex_);
  records_.clear();
}

}  // namespace sleec::loop
