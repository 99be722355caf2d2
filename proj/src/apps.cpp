#include "ordersim/apps.hpp"

namespace ordersim {

namespace {

RuleAction act(std::string actuator, std::string command, std::vector<std::string> path) {
  return RuleAction{std::move(actuator), std::move(command), std::move(path)};
}

RuleVariant variant(std::string source, std::string event_name,
                    std::vector<RuleAction> actions,
                    std::optional<ValuePredicate> predicate = std::nullopt) {
  return RuleVariant{std::move(source), std::move(event_name), std::move(predicate),
                     std::move(actions)};
}

std::vector<AppRule> make_catalog() {
  std::vector<AppRule> rules;

  auto mobile_path = [](const std::string& actuator) {
    return std::vector<std::string>{"mobile-app", "user-iot-cloud", "edge", actuator};
  };
  auto device_path = [](const std::string& sensor, const std::string& actuator) {
    return std::vector<std::string>{sensor, "edge", "user-iot-cloud", "edge", actuator};
  };
  auto ta_loop_path = [](const std::string& sensor, const std::string& actuator) {
    return std::vector<std::string>{sensor,        "edge", "user-iot-cloud", "ifttt-cloud",
                                    "user-iot-cloud", "edge", actuator};
  };
  auto hue_path = [](const std::string& sensor) {
    return std::vector<std::string>{sensor, "edge", "user-iot-cloud", "hue-cloud", "hue-light"};
  };

  // M1: start or stop the smart oven from the mobile app.
  rules.push_back({"M1",
                   {1},
                   {variant("mobile-app", "oven-icon-on",
                            {act("smart-oven", "oven-on", mobile_path("smart-oven"))}),
                    variant("mobile-app", "oven-icon-off",
                            {act("smart-oven", "oven-off", mobile_path("smart-oven"))})}});

  // M2: smart plug on/off from the mobile app.
  rules.push_back({"M2",
                   {2},
                   {variant("mobile-app", "plug-icon-on",
                            {act("smart-plug", "plug-on", mobile_path("smart-plug"))}),
                    variant("mobile-app", "plug-icon-off",
                            {act("smart-plug", "plug-off", mobile_path("smart-plug"))})}});

  // M3: one click first unlocks then opens the garage, or first closes then
  // locks it. The two commands of a click target different actuators.
  rules.push_back(
      {"M3",
       {3},
       {variant("mobile-app", "icon-click",
                {act("garage-lock", "unlock", mobile_path("garage-lock")),
                 act("garage-door", "open", mobile_path("garage-door"))}),
        variant("mobile-app", "icon-click-close",
                {act("garage-door", "close", mobile_path("garage-door")),
                 act("garage-lock", "lock", mobile_path("garage-lock"))})}});

  // M4: open or close the window from the mobile app.
  rules.push_back({"M4",
                   {1, 3},
                   {variant("mobile-app", "open-window",
                            {act("window", "open", mobile_path("window"))}),
                    variant("mobile-app", "close-window",
                            {act("window", "close", mobile_path("window"))})}});

  // TA1: log temperature measurements to a cloud spreadsheet.
  rules.push_back(
      {"TA1",
       {},
       {variant("temperature-sensor", "temperature",
                {act("google-spreadsheet", "log-measurement",
                     {"temperature-sensor", "edge", "user-iot-cloud", "ifttt-cloud",
                      "google-cloud", "google-spreadsheet"})})}});

  // TA2: camera follows the motion sensor through the trigger-action cloud.
  rules.push_back(
      {"TA2",
       {1},
       {variant("motion-sensor", "motion-active",
                {act("smart-camera", "camera-on", ta_loop_path("motion-sensor", "smart-camera"))}),
        variant("motion-sensor", "motion-inactive",
                {act("smart-camera", "camera-off",
                     ta_loop_path("motion-sensor", "smart-camera"))})}});

  // TA3: stop the fan when the temperature drops below the threshold.
  rules.push_back(
      {"TA3",
       {},
       {variant("temperature-sensor", "temperature",
                {act("smart-fan", "fan-off", ta_loop_path("temperature-sensor", "smart-fan"))},
                ValuePredicate{CmpOp::Le, 30.0})}});

  // TA4: doorbell turns on the Hue light via the trigger-action cloud.
  rules.push_back(
      {"TA4",
       {2},
       {variant("doorbell", "doorbell-ring",
                {act("hue-light", "light-on",
                     {"doorbell", "edge", "user-iot-cloud", "ifttt-cloud", "hue-cloud",
                      "hue-light"})})}});

  // TA5: motion turns on the Hue light via the trigger-action cloud.
  rules.push_back(
      {"TA5",
       {2},
       {variant("motion-sensor", "motion-active",
                {act("hue-light", "light-on",
                     {"motion-sensor", "edge", "user-iot-cloud", "ifttt-cloud", "hue-cloud",
                      "hue-light"})})}});

  // TA6: thermostat set/clear from the trigger-action mobile app.
  const std::vector<std::string> ta6_path = {"mobile-app", "ifttt-cloud", "user-iot-cloud",
                                             "edge", "smart-thermostat"};
  rules.push_back({"TA6",
                   {1, 2},
                   {variant("mobile-app", "thermostat-set",
                            {act("smart-thermostat", "thermostat-set", ta6_path)}),
                    variant("mobile-app", "thermostat-clear",
                            {act("smart-thermostat", "thermostat-clear", ta6_path)})}});

  // IoT1: open the window on smoke, close it otherwise.
  rules.push_back(
      {"IoT1",
       {1},
       {variant("smoke-sensor", "smoke-detected",
                {act("window", "open", device_path("smoke-sensor", "window"))}),
        variant("smoke-sensor", "smoke-clear",
                {act("window", "close", device_path("smoke-sensor", "window"))})}});

  // IoT2: start the fan above the temperature threshold.
  rules.push_back(
      {"IoT2",
       {1},
       {variant("temperature-sensor", "temperature",
                {act("smart-fan", "fan-on", device_path("temperature-sensor", "smart-fan"))},
                ValuePredicate{CmpOp::Gt, 30.0})}});

  // IoT3: alarm armed when everyone leaves; two presence sensors feed it.
  rules.push_back(
      {"IoT3",
       {2},
       {variant("presence-sensor-1", "users-away",
                {act("smart-alarm", "alarm-on",
                     device_path("presence-sensor-1", "smart-alarm"))}),
        variant("presence-sensor-2", "users-present",
                {act("smart-alarm", "alarm-off",
                     device_path("presence-sensor-2", "smart-alarm"))})}});

  // IoT4: motion unlocks the door, no motion locks it.
  rules.push_back(
      {"IoT4",
       {2},
       {variant("motion-sensor", "motion-active",
                {act("smart-lock", "unlock", device_path("motion-sensor", "smart-lock"))}),
        variant("motion-sensor", "motion-inactive",
                {act("smart-lock", "lock", device_path("motion-sensor", "smart-lock"))})}});

  // IoT5: lock or unlock the door through the voice assistant.
  const std::vector<std::string> iot5_path = {"voice-assistant", "google-cloud",
                                              "user-iot-cloud", "edge", "smart-lock"};
  rules.push_back({"IoT5",
                   {1, 2},
                   {variant("voice-assistant", "voice-lock",
                            {act("smart-lock", "lock", iot5_path)}),
                    variant("voice-assistant", "voice-unlock",
                            {act("smart-lock", "unlock", iot5_path)})}});

  // IoT6: button push locks, button hold unlocks.
  rules.push_back({"IoT6",
                   {2},
                   {variant("button", "button-push",
                            {act("smart-lock", "lock", device_path("button", "smart-lock"))}),
                    variant("button", "button-hold",
                            {act("smart-lock", "unlock", device_path("button", "smart-lock"))})}});

  // IoT7: Hue light on/off with a button click, via the vendor cloud.
  rules.push_back({"IoT7",
                   {1, 2},
                   {variant("button", "button-click-on",
                            {act("hue-light", "light-on", hue_path("button"))}),
                    variant("button", "button-click-off",
                            {act("hue-light", "light-off", hue_path("button"))})}});

  // IoT8: door contact drives the Hue light.
  rules.push_back(
      {"IoT8",
       {2},
       {variant("contact-sensor-door", "door-open",
                {act("hue-light", "light-on", hue_path("contact-sensor-door"))}),
        variant("contact-sensor-door", "door-closed",
                {act("hue-light", "light-off", hue_path("contact-sensor-door"))})}});

  // IoT9: cut the plug above the power threshold.
  rules.push_back(
      {"IoT9",
       {2},
       {variant("power-meter", "power",
                {act("smart-plug", "plug-off", device_path("power-meter", "smart-plug"))},
                ValuePredicate{CmpOp::Gt, 1500.0})}});

  // IoT10: window contact pauses the thermostat.
  rules.push_back(
      {"IoT10",
       {2},
       {variant("contact-sensor-window", "window-opened",
                {act("smart-thermostat", "thermostat-off",
                     device_path("contact-sensor-window", "smart-thermostat"))}),
        variant("contact-sensor-window", "window-closed",
                {act("smart-thermostat", "thermostat-on",
                     device_path("contact-sensor-window", "smart-thermostat"))})}});

  // IoT11: motion drives the thermostat.
  rules.push_back(
      {"IoT11",
       {2},
       {variant("motion-sensor", "motion-active",
                {act("smart-thermostat", "thermostat-on",
                     device_path("motion-sensor", "smart-thermostat"))}),
        variant("motion-sensor", "motion-inactive",
                {act("smart-thermostat", "thermostat-off",
                     device_path("motion-sensor", "smart-thermostat"))})}});

  // IoT12: window shade from the wall switch.
  rules.push_back(
      {"IoT12",
       {3},
       {variant("switch", "switch-on",
                {act("window-shade", "shade-open", device_path("switch", "window-shade"))}),
        variant("switch", "switch-off",
                {act("window-shade", "shade-close", device_path("switch", "window-shade"))})}});

  // IoT13: sprinkler valve on push, irrigation on hold; routed through the
  // trigger-action cloud and a secondary IoT cloud. Variants are listed in
  // the safe temporal order.
  auto iot13_path = [](const std::string& actuator) {
    return std::vector<std::string>{"button",      "edge",          "user-iot-cloud",
                                    "ifttt-cloud", "aux-iot-cloud", "edge",
                                    actuator};
  };
  rules.push_back(
      {"IoT13",
       {3},
       {variant("button", "button-push-up",
                {act("sprinkler-valve", "valve-open", iot13_path("sprinkler-valve"))}),
        variant("button", "button-hold-start",
                {act("irrigation-system", "irrigation-start",
                     iot13_path("irrigation-system"))}),
        variant("button", "button-hold-stop",
                {act("irrigation-system", "irrigation-stop",
                     iot13_path("irrigation-system"))}),
        variant("button", "button-push-down",
                {act("sprinkler-valve", "valve-close", iot13_path("sprinkler-valve"))})}});

  return rules;
}

}  // namespace

const std::vector<AppRule>& builtin_catalog() {
  static const std::vector<AppRule> catalog = make_catalog();
  return catalog;
}

std::vector<RuleMatch> match_rules(const EventSpec& event, const std::vector<AppRule>& rules) {
  std::vector<RuleMatch> matches;
  for (const auto& rule : rules) {
    for (const auto& variant : rule.variants) {
      if (variant.source != event.source || variant.event_name != event.name) continue;
      if (variant.predicate && !variant.predicate->holds(event.value)) continue;
      matches.push_back({&rule, &variant});
      break;  // at most one variant of a rule fires per event
    }
  }
  return matches;
}

}  // namespace ordersim
