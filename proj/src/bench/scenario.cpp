#include "sleec/bench/scenario.hpp"

#include "sleec/syntax/parser.hpp"

namespace sleec::bench {

namespace {

const char* const kScenarioSleec = R"SLEEC(// AssistiveCareRobot ruleset: an assistive humanoid robot supporting
// rehabilitation patients through training sessions, mealtimes, and data
// requests.
//
// Prose-to-identifier mapping:
//   "the user is ready"                            -> userReady
//   "the user cares about privacy"                 -> privacyConcern
//   "the room is too warm"                         -> tooWarm (roomTemperature >= 26)
//   "permission to keep the door open was asked"   -> permissionAsked
//   "the user agrees to keep the door open"        -> doorPermissionGranted
//   "the user is exercising"                       -> userExercising
//   "the user complains about being tired"         -> userTired
//   "preference to exercise in silence"            -> silencePreferred
//   "did fewer exercise repetitions than expected" -> fewerExerciseRepetitions
//   "the user has already been encouraged"         -> userEncouraged
//   "physical issues resulting from the exercises" -> userPhysicalIssues
//   "a person asks for training or medical data"   -> dataAccessRequested
//   "the user granted consent"                     -> consentGranted
//   "the person is authorized"                     -> personAuthorized
//   "the user asks for food"                       -> foodRequested
//   "low glucose level" / "risk of hypoglycemia"   -> lowGlucose (one monitored fact)
//   "the user is sleeping"                         -> userSleeping
//   "the user is in the REM stage of sleep"        -> remSleep
//   "wants to eat outside the dietary plan"        -> dietDeviationRequested
//   "training results allow a different food"      -> trainingAllowsDifferentFood
//   "the user is particularly distressed"          -> userDistressed
//   "do nothing" / "do not wake up the user"       -> noop (reserved empty-effect capability)

MONITORED userReady : BOOLEAN
MONITORED privacyConcern : BOOLEAN
MONITORED roomTemperature : INTEGER RANGE 10 .. 40
MONITORED permissionAsked : BOOLEAN
MONITORED doorPermissionGranted : BOOLEAN
MONITORED userExercising : BOOLEAN
MONITORED userTired : BOOLEAN
MONITORED silencePreferred : BOOLEAN
MONITORED fewerExerciseRepetitions : BOOLEAN
MONITORED userEncouraged : BOOLEAN
MONITORED userPhysicalIssues : BOOLEAN
MONITORED dataAccessRequested : BOOLEAN
MONITORED consentGranted : BOOLEAN
MONITORED personAuthorized : BOOLEAN
MONITORED foodRequested : BOOLEAN
MONITORED lowGlucose : BOOLEAN
MONITORED userSleeping : BOOLEAN
MONITORED remSleep : BOOLEAN
MONITORED dietDeviationRequested : BOOLEAN
MONITORED trainingAllowsDifferentFood : BOOLEAN
MONITORED userDistressed : BOOLEAN
MONITORED timeOfDay : ENUM { STARTTRAININGTIME, TRAININGTIME, MEALTIME, FREETIME }

CAPABILITY greetUser
CAPABILITY startSession
CAPABILITY closeDoor
CAPABILITY openDoor
CAPABILITY askDoorPermission
CAPABILITY showNextExercise
CAPABILITY encourage
CAPABILITY askUserIntent
CAPABILITY notifySessionEnd
CAPABILITY alertNurse
CAPABILITY shareData
CAPABILITY refuseDataSharing
CAPABILITY explainDataPolicy
CAPABILITY explainDietPolicy
CAPABILITY giveSnack
CAPABILITY informNurse
CAPABILITY remindToEat
CAPABILITY wakeUpUser
CAPABILITY deliverMeal
CAPABILITY explainDietImportance
CAPABILITY deliverAlternativeFood

DERIVED tooWarm = roomTemperature >= 26

SCOPE StartTrainingTime = timeOfDay = STARTTRAININGTIME
SCOPE TrainingTime = timeOfDay = TRAININGTIME
SCOPE Mealtime = timeOfDay = MEALTIME
SCOPE Anytime = TRUE

// The robot must never be obliged to open and close the door at once.
INVARIANT inv_1 NOT (ENFORCED(openDoor) AND ENFORCED(closeDoor))

SCOPE StartTrainingTime
RULE S1
IF userReady THEN greetUser AND startSession
UNLESS privacyConcern IN WHICH CASE greetUser AND closeDoor AND startSession
UNLESS tooWarm IN WHICH CASE askDoorPermission
UNLESS NOT permissionAsked IN WHICH CASE noop

SCOPE StartTrainingTime
RULE S1a
IF permissionAsked AND doorPermissionGranted THEN greetUser AND startSession

SCOPE StartTrainingTime
RULE S1b
IF permissionAsked AND tooWarm AND NOT doorPermissionGranted THEN alertNurse AND closeDoor

SCOPE TrainingTime
RULE S2
IF NOT userExercising THEN showNextExercise AFTER 1 MINUTE
UNLESS fewerExerciseRepetitions IN WHICH CASE encourage
UNLESS userEncouraged IN WHICH CASE askUserIntent
UNLESS userPhysicalIssues IN WHICH CASE notifySessionEnd AND alertNurse

SCOPE TrainingTime
RULE S2a
IF userExercising AND userTired THEN encourage
UNLESS silencePreferred IN WHICH CASE noop

SCOPE Anytime
RULE S3
IF dataAccessRequested THEN shareData
UNLESS NOT consentGranted OR NOT personAuthorized IN WHICH CASE refuseDataSharing AND explainDataPolicy

SCOPE Anytime
RULE S4
IF foodRequested AND NOT (timeOfDay = MEALTIME) THEN explainDietPolicy
UNLESS lowGlucose IN WHICH CASE giveSnack AND informNurse

SCOPE Mealtime
RULE S5
IF NOT userReady THEN remindToEat
UNLESS userSleeping IN WHICH CASE wakeUpUser WITHIN 5 MINUTE OTHERWISE alertNurse
UNLESS remSleep IN WHICH CASE noop AND informNurse
UNLESS lowGlucose IN WHICH CASE alertNurse

SCOPE Mealtime
RULE S6
IF userReady THEN deliverMeal
UNLESS dietDeviationRequested IN WHICH CASE explainDietImportance AND deliverMeal
UNLESS trainingAllowsDifferentFood OR userDistressed IN WHICH CASE deliverAlternativeFood
)SLEEC";

// server.url "" keeps the model in process; point it at a running
// `sleec serve` (e.g. "http://127.0.0.1:8470") for the split deployment.
const char* const kScenarioConfig = R"JSON({
  "server": {
    "url": "",
    "session": "assistive",
    "retries": 3,
    "backoff_ms": 100
  },
  "channels": {
    "probes": "/probes",
    "conditions": "/conditions",
    "obligations": "/obligations",
    "tasks": "/tasks",
    "acks": "/acks"
  },
  "clock": "virtual",
  "snapshot_mode": "strict",
  "model": "fixtures/assistive.sleec",
  "tasks": {
    "greetUser": [{"name": "speak", "params": {"phrase": "greeting_localized"}}],
    "startSession": [{"name": "start_training_session"}],
    "closeDoor": [{"name": "actuate_door", "params": {"position": "closed"}}],
    "openDoor": [{"name": "actuate_door", "params": {"position": "open"}}],
    "askDoorPermission": [{"name": "speak", "params": {"phrase": "ask_keep_door_open"}}],
    "showNextExercise": [{"name": "display_exercise"}],
    "encourage": [{"name": "speak", "params": {"phrase": "encouragement"}}],
    "askUserIntent": [{"name": "display_prompt", "params": {"prompt": "how_to_proceed"}}],
    "notifySessionEnd": [{"name": "speak", "params": {"phrase": "session_suspended"}}],
    "alertNurse": [{"name": "compose_alert"}, {"name": "send_message", "params": {"target": "nurse_channel"}}],
    "shareData": [{"name": "export_records"}],
    "refuseDataSharing": [{"name": "deny_request"}],
    "explainDataPolicy": [{"name": "speak", "params": {"phrase": "data_policy"}}],
    "explainDietPolicy": [{"name": "speak", "params": {"phrase": "diet_policy"}}],
    "giveSnack": [{"name": "dispense_snack"}],
    "informNurse": [{"name": "send_message", "params": {"target": "nurse_channel"}}],
    "remindToEat": [{"name": "speak", "params": {"phrase": "meal_reminder"}}],
    "wakeUpUser": [{"name": "speak", "params": {"phrase": "gentle_wake", "volume": "low"}}],
    "deliverMeal": [{"name": "fetch_tray"}, {"name": "serve_meal"}],
    "explainDietImportance": [{"name": "speak", "params": {"phrase": "diet_importance"}}],
    "deliverAlternativeFood": [{"name": "fetch_tray"}, {"name": "serve_alternative_meal"}],
    "noop": []
  },
  "thresholds": []
}
)JSON";

}  // namespace

const std::string& scenario_source() {
  static const std::string source = kScenarioSleec;
  return source;
}

const std::string& scenario_config_source() {
  static const std::string source = kScenarioConfig;
  return source;
}

syntax::Ruleset load_scenario() { return syntax::parse_ruleset(scenario_source()); }

}  // namespace sleec::bench
