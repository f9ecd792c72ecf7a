// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 crowdbench authors
//
// Reference external policy for the NDJSON wire protocol. Reads the
// handshake and observations on stdin, answers on stdout.

#include <chrono>
#include <cmath>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

int main(int argc, char **argv) {
  CLI::App app{"Example external policy"};
  std::string mode = "constant";
  double vx = 0.0, vy = 1.0, sleep_s = 1.5;
  app.add_option("--mode", mode, "constant | goal | garbage | slow | exit")
      ->check(CLI::IsMember({"constant", "goal", "garbage", "slow", "exit"}));
  app.add_option("--vx", vx, "Constant reply x velocity");
  app.add_option("--vy", vy, "Constant reply y velocity");
  app.add_option("--sleep", sleep_s, "Delay before each reply in slow mode (s)");
  CLI11_PARSE(app, argc, argv);

  std::string line;
  if (!std::getline(std::cin, line)) return 1;
  std::cout << R"({"ok":true})" << std::endl;

  while (std::getline(std::cin, line)) {
    if (mode == "exit") return 0;
    if (mode == "garbage") {
      std::cout << "this is not json" << std::endl;
      continue;
    }
    if (mode == "slow") std::this_thread::sleep_for(std::chrono::duration<double>(sleep_s));
    nlohmann::json reply{{"vx", vx}, {"vy", vy}};
    if (mode == "goal") {
      const auto obs = nlohmann::json::parse(line, nullptr, false);
      if (obs.is_discarded()) return 2;
      const auto &r = obs["robot"];
      const double dx = r["gx"].get<double>() - r["px"].get<double>();
      const double dy = r["gy"].get<double>() - r["py"].get<double>();
      const double n = std::hypot(dx, dy);
      const double v = r["vmax"].get<double>();
      reply = {{"vx", n > 0 ? v * dx / n : 0.0}, {"vy", n > 0 ? v * dy / n : 0.0}};
    }
    std::cout << reply.dump() << std::endl;
  }
  return 0;
}
