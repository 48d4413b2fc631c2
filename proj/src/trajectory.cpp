#include "trajectory.hpp"

#include "io.hpp"

namespace bbcirl {

void TrajectoryLog::check_consistent() const {
  int prev_episode = -1;
  int prev_t = -1;
  int prev_next = -1;
  for (const auto& r : records) {
    if (r.episode < 0 || r.t < 0 || r.t >= horizon)
      throw UsageError("trajectory: record outside horizon at episode " +
                       std::to_string(r.episode));
    if (r.episode == prev_episode) {
      if (r.t != prev_t + 1)
        throw UsageError("trajectory: non-consecutive timesteps in episode " +
                         std::to_string(r.episode));
      if (r.state != prev_next)
        throw UsageError("trajectory: broken state chain in episode " +
                         std::to_string(r.episode));
    } else {
      if (r.episode != prev_episode + 1)
        throw UsageError("trajectory: episodes not contiguous near episode " +
                         std::to_string(r.episode));
      if (r.t != 0)
        throw UsageError("trajectory: episode " + std::to_string(r.episode) +
                         " does not start at t=0");
    }
    prev_episode = r.episode;
    prev_t = r.t;
    prev_next = r.next_state;
  }
  if (prev_episode + 1 != num_episodes)
    throw UsageError("trajectory: header episode count does not match records");
}

std::string TrajectoryLog::serialize(const std::vector<std::string>& manifest) const {
  std::string out = "# env_hash=" + hex64(env_hash) + "  E=" + std::to_string(num_episodes) +
                    " T=" + std::to_string(horizon) + "\n";
  for (const auto& line : manifest) out += "# " + line + "\n";
  out += "episode,t,state,action,next_state\n";
  for (const auto& r : records) {
    out += std::to_string(r.episode) + "," + std::to_string(r.t) + "," +
           std::to_string(r.state) + "," + std::to_string(r.action) + "," +
           std::to_string(r.next_state) + "\n";
  }
  return out;
}

TrajectoryLog TrajectoryLog::deserialize(std::string_view text) {
  TrajectoryLog log;
  bool header_seen = false;
  bool columns_seen = false;
  for (const auto& raw : split(text, '\n')) {
    auto line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      auto body = std::string(trim(line.substr(1)));
      auto pos = body.find("env_hash=");
      if (pos != std::string::npos) {
        for (const auto& tokr : split(body, ' ')) {
          auto tok = trim(tokr);
          if (tok.starts_with("env_hash="))
            log.env_hash = [&] {
              std::uint64_t v = 0;
              for (char c : tok.substr(9)) {
                v <<= 4;
                if (c >= '0' && c <= '9') v |= static_cast<std::uint64_t>(c - '0');
                else if (c >= 'a' && c <= 'f') v |= static_cast<std::uint64_t>(c - 'a' + 10);
                else throw IoError("trajectory: bad env_hash");
              }
              return v;
            }();
          else if (tok.starts_with("E="))
            log.num_episodes = static_cast<int>(parse_int(tok.substr(2)));
          else if (tok.starts_with("T="))
            log.horizon = static_cast<int>(parse_int(tok.substr(2)));
        }
        header_seen = true;
      }
      continue;
    }
    if (!columns_seen && line.starts_with("episode,")) {
      columns_seen = true;
      continue;
    }
    auto cols = split(line, ',');
    if (cols.size() != 5) throw IoError("trajectory: expected 5 columns, got " +
                                        std::to_string(cols.size()));
    StepRecord r;
    r.episode = static_cast<int>(parse_int(cols[0]));
    r.t = static_cast<int>(parse_int(cols[1]));
    r.state = static_cast<int>(parse_int(cols[2]));
    r.action = static_cast<int>(parse_int(cols[3]));
    r.next_state = static_cast<int>(parse_int(cols[4]));
    log.records.push_back(r);
  }
  if (!header_seen) throw IoError("trajectory: missing env_hash header line");
  return log;
}

}  // namespace bbcirl
