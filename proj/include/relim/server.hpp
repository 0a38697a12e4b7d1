/*
 * Copyright 2026 The relim Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include <httplib.h>

#include "relim/json_io.hpp"

namespace relim::server {

struct Response {
  int status = 200;
  json body;
};

struct HistoryEvent {
  std::size_t seq = 0;
  std::string action;  // parse | step | re | merge | rename
  std::string parent;  // empty for parse
  std::string handle;
  json args;
  bool created = false;  // false when the result deduped onto an existing handle
};

inline json event_json(const HistoryEvent& e) {
  json j = {{"seq", e.seq}, {"action", e.action}, {"handle", e.handle}, {"args", e.args}, {"created", e.created}};
  if (!e.parent.empty()) j["parent"] = e.parent;
  return j;
}

class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Handle store plus the request router. Everything except the store is a
// pure function of the request, so the HTTP layer below stays thin.
class Service {
 public:
  explicit Service(EngineOptions opts = {}) : opts_(opts) {}

  // Appends every event to `path` (one JSON object per line) from now on.
  void set_history_file(const std::string& path) {
    std::lock_guard<std::mutex> g(mu_);
    history_file_ = path;
  }

  Response handle(const std::string& method, const std::string& path,
                  const std::map<std::string, std::string>& query, const std::string& body) {
    try {
      return route(method, path, query, body);
    } catch (const NotFound& e) {
      return {404, {{"error", e.what()}}};
    } catch (const ResourceLimitError& e) {
      return {409, {{"error", e.what()}, {"size_reached", e.reached()}, {"cap", e.cap()}}};
    } catch (const ParseError& e) {
      return {400, {{"error", e.what()}, {"line", e.line()}}};
    } catch (const InvalidArgument& e) {
      return {400, {{"error", e.what()}}};
    } catch (const json::exception& e) {
      return {400, {{"error", std::string("malformed request: ") + e.what()}}};
    }
  }

  std::optional<Problem> find(const std::string& h) const {
    std::lock_guard<std::mutex> g(mu_);
    auto it = store_.find(h);
    if (it == store_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<HistoryEvent> history() const {
    std::lock_guard<std::mutex> g(mu_);
    return history_;
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> g(mu_);
    return store_.size();
  }

  // Re-executes a recorded history. Throws if any handle comes out different.
  void replay(const std::vector<json>& events) {
    for (const auto& e : events) {
      std::string action = e.at("action");
      const json& args = e.at("args");
      std::string got;
      if (action == "parse") {
        got = commit("parse", "", args, parse_problem(args.at("text").get<std::string>(), opts_));
      } else {
        got = derive(action, e.at("parent").get<std::string>(), args, opts_).first;
      }
      if (got != e.at("handle").get<std::string>())
        throw InvalidArgument("replay diverged at event " + e.at("seq").dump() + ": " + got);
    }
  }

  void replay_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) return;
    std::vector<json> events;
    std::string line;
    while (std::getline(in, line))
      if (!detail::trim(line).empty()) events.push_back(parse_json(line));
    std::string keep;
    {
      std::lock_guard<std::mutex> g(mu_);
      keep.swap(history_file_);  // do not re-append what we are reading
    }
    replay(events);
    std::lock_guard<std::mutex> g(mu_);
    history_file_ = keep;
  }

 private:
  Problem get(const std::string& h) const {
    auto p = find(h);
    if (!p) throw NotFound("unknown handle '" + h + "'");
    return *p;
  }

  // atomic insert-if-absent; history is appended in the same critical section
  std::string commit(const std::string& action, const std::string& parent, const json& args, const Problem& p) {
    std::string h = problem_handle(p);
    std::lock_guard<std::mutex> g(mu_);
    bool created = store_.emplace(h, p).second;
    HistoryEvent e{history_.size() + 1, action, parent, h, args, created};
    history_.push_back(e);
    if (!history_file_.empty()) {
      std::ofstream out(history_file_, std::ios::app);
      out << event_json(e).dump() << "\n";
    }
    return h;
  }

  static EngineOptions with_cap(EngineOptions o, const json& body) {
    if (body.contains("cap")) {
      auto c = body.at("cap").get<std::size_t>();
      if (c == 0) throw InvalidArgument("cap must be positive");
      o.cap = c;
    }
    return o;
  }

  // step | re | merge | rename applied to a stored problem
  std::pair<std::string, json> derive(const std::string& action, const std::string& parent, const json& args,
                                      const EngineOptions& o) {
    Problem p = get(parent);
    if (action == "step") {
      StepResult st = full_step(p, o);
      std::string h = commit(action, parent, args, st.problem);
      return {h, step_json(st)};
    }
    if (action == "re") {
      SetProblem sp = re_step(p, o);
      std::string h = commit(action, parent, args, sp.problem);
      return {h, problem_json(sp.problem)};
    }
    if (action == "merge") {
      const json& gs = args.at("groups");
      if (!gs.is_array()) throw InvalidArgument("groups must be an array of label arrays");
      std::vector<std::vector<std::string>> groups;
      for (const auto& g : gs) groups.push_back(g.get<std::vector<std::string>>());
      MergeResult m = merge_labels(p, groups);
      std::string h = commit(action, parent, args, m.problem);
      json j = problem_json(m.problem);
      j["map"] = renaming_json(m.map);
      return {h, j};
    }
    if (action == "rename") {
      Problem q = rename_labels(p, renaming_from_json(args.at("map")));
      std::string h = commit(action, parent, args, q);
      return {h, problem_json(q)};
    }
    throw InvalidArgument("unknown action '" + action + "'");
  }

  json lineage(const std::string& h) const {
    std::lock_guard<std::mutex> g(mu_);
    json out = json::array();
    std::string cur = h;
    std::set<std::string> seen;
    while (!cur.empty() && seen.insert(cur).second) {
      auto it = std::find_if(history_.begin(), history_.end(),
                             [&](const HistoryEvent& e) { return e.handle == cur && e.created; });
      if (it == history_.end()) break;
      out.insert(out.begin(), event_json(*it));
      cur = it->parent;
    }
    return out;
  }

  Response route(const std::string& method, const std::string& path,
                 const std::map<std::string, std::string>& query, const std::string& body) {
    static const std::regex kProblem(R"(^/problems/([0-9a-f]+)(/([a-z]+))?$)");
    auto body_json = [&]() -> json {
      if (detail::trim(body).empty()) return json::object();
      json j = parse_json(body);
      if (!j.is_object()) throw InvalidArgument("request body must be a JSON object");
      return j;
    };
    auto flag = [&](const std::string& k) {
      auto it = query.find(k);
      return it != query.end() && (it->second.empty() || it->second == "1" || it->second == "true");
    };

    if (path == "/problems") {
      if (method != "POST") return {405, {{"error", "use POST"}}};
      json b = body_json();
      if (!b.contains("text") || !b.at("text").is_string()) throw InvalidArgument("body needs a 'text' string");
      json args = {{"text", b.at("text")}};
      Problem p = parse_problem(b.at("text").get<std::string>(), with_cap(opts_, b));
      commit("parse", "", args, p);
      return {201, problem_json(p, flag("condensed"))};
    }
    if (path == "/verify/fixedpoint" || path == "/verify/onestep") {
      if (method != "POST") return {405, {{"error", "use POST"}}};
      json b = body_json();
      EngineOptions o = with_cap(opts_, b);
      std::size_t delta = b.at("delta"), rank = b.at("rank");
      if (path == "/verify/fixedpoint") return {200, fixed_point_json(verify_fixed_point(delta, rank, o))};
      ZVector zv{b.at("z").get<std::vector<std::size_t>>(), b.at("s").get<std::size_t>()};
      return {200, onestep_json(verify_onestep(zv, b.at("q").get<std::size_t>(), delta, rank, o))};
    }

    std::smatch m;
    if (!std::regex_match(path, m, kProblem)) throw NotFound("no route for '" + path + "'");
    std::string h = m[1];
    std::string op = m[3];
    if (op.empty()) {
      if (method != "GET") return {405, {{"error", "use GET"}}};
      return {200, problem_json(get(h), flag("condensed"))};
    }
    if (op == "diagram" || op == "zeroround" || op == "history") {
      if (method != "GET") return {405, {{"error", "use GET"}}};
      Problem p = get(h);
      if (op == "diagram") {
        auto it = query.find("side");
        std::string side = it == query.end() ? "node" : it->second;
        if (side != "node" && side != "edge") throw InvalidArgument("side must be node or edge");
        return {200, diagram_json(p, side == "edge")};
      }
      if (op == "zeroround") return {200, zero_round_json(p, zero_round_solvable(p))};
      json events = json::array();
      {
        std::lock_guard<std::mutex> g(mu_);
        for (const auto& e : history_)
          if (e.handle == h || e.parent == h) events.push_back(event_json(e));
      }
      return {200, {{"handle", h}, {"lineage", lineage(h)}, {"events", events}}};
    }
    if (op == "step" || op == "re" || op == "merge" || op == "rename") {
      if (method != "POST") return {405, {{"error", "use POST"}}};
      json b = body_json();
      json args = json::object();
      if (op == "merge") args["groups"] = b.at("groups");
      if (op == "rename") args["map"] = b.at("map");
      get(h);  // 404 before any work
      auto [nh, j] = derive(op, h, args, with_cap(opts_, b));
      (void)nh;
      j["parent"] = h;
      return {201, j};
    }
    throw NotFound("no route for '" + path + "'");
  }

  EngineOptions opts_;
  mutable std::mutex mu_;
  std::map<std::string, Problem> store_;
  std::vector<HistoryEvent> history_;
  std::string history_file_;
};

// Binds routes of `svc` onto an httplib server.
inline void mount(httplib::Server& http, Service& svc) {
  auto forward = [&svc](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> q;
    for (const auto& [k, v] : req.params) q[k] = v;
    Response r = svc.handle(req.method, req.path, q, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(2) + "\n", "application/json");
  };
  http.Get(".*", forward);
  http.Post(".*", forward);
}

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string history_file;
};

// Blocks until the server stops.
inline bool serve(const ServeOptions& so, const EngineOptions& opts = {}) {
  Service svc(opts);
  if (!so.history_file.empty()) {
    svc.replay_file(so.history_file);
    svc.set_history_file(so.history_file);
  }
  httplib::Server http;
  mount(http, svc);
  return http.listen(so.host, so.port);
}

}  // namespace relim::server
