// Copyright 2026 The BASTS Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "basts/cfg.h"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>

#include "basts/errors.h"

namespace basts {
namespace {

struct LoopTargets {
  int continue_to;
  std::vector<int> breaks;
};

class CfgBuilder {
 public:
  explicit CfgBuilder(const Method& m) : m_(m) {}

  Cfg Build() {
    const auto flow = m_.FlowStatements();
    cfg_.nodes.push_back({0, CfgNodeKind::kStart, std::nullopt});
    for (StmtId s : flow) {
      const int id = static_cast<int>(cfg_.nodes.size());
      cfg_.nodes.push_back({id, CfgNodeKind::kStmt, s});
      node_of_[s] = id;
    }
    const int end = static_cast<int>(cfg_.nodes.size());
    cfg_.nodes.push_back({end, CfgNodeKind::kEnd, std::nullopt});
    cfg_.entry = 0;
    cfg_.exit = end;

    std::vector<int> exits = Sequence(m_.body, {cfg_.entry});
    Connect(exits, end);

    std::sort(cfg_.edges.begin(), cfg_.edges.end());
    cfg_.edges.erase(std::unique(cfg_.edges.begin(), cfg_.edges.end()),
                     cfg_.edges.end());
    return std::move(cfg_);
  }

 private:
  void Connect(const std::vector<int>& preds, int to) {
    for (int p : preds) cfg_.edges.emplace_back(p, to);
  }

  int Enter(StmtId s, const std::vector<int>& preds) {
    if (preds.empty())
      throw CfgError(std::string("unreachable statement (") +
                     StmtKindName(m_.stmt(s).kind) + ")");
    const int id = node_of_.at(s);
    Connect(preds, id);
    return id;
  }

  std::vector<int> Sequence(const std::vector<StmtId>& stmts, std::vector<int> preds) {
    for (StmtId s : stmts) preds = Visit(s, preds);
    return preds;
  }

  // Returns the dangling exits of `s` given its predecessors.
  std::vector<int> Visit(StmtId sid, const std::vector<int>& preds) {
    const Statement& s = m_.stmt(sid);
    switch (s.kind) {
      case StmtKind::kBlock:
        return Sequence(s.children, preds);
      case StmtKind::kReturn: {
        int id = Enter(sid, preds);
        cfg_.edges.emplace_back(id, cfg_.exit);
        return {};
      }
      case StmtKind::kBreak: {
        int id = Enter(sid, preds);
        if (loops_.empty()) throw CfgError("break outside of a loop");
        loops_.back().breaks.push_back(id);
        return {};
      }
      case StmtKind::kContinue: {
        int id = Enter(sid, preds);
        if (loops_.empty()) throw CfgError("continue outside of a loop");
        cfg_.edges.emplace_back(id, loops_.back().continue_to);
        return {};
      }
      case StmtKind::kIf: {
        int header = Enter(sid, preds);
        std::vector<int> exits = Visit(s.children.at(0), {header});
        if (s.children.size() > 1) {
          auto other = Visit(s.children[1], {header});
          exits.insert(exits.end(), other.begin(), other.end());
        } else {
          exits.push_back(header);
        }
        return exits;
      }
      case StmtKind::kWhile: {
        int header = Enter(sid, preds);
        loops_.push_back({header, {}});
        auto body_exits = Visit(s.children.at(0), {header});
        Connect(body_exits, header);
        std::vector<int> exits{header};
        for (int b : loops_.back().breaks) exits.push_back(b);
        loops_.pop_back();
        return exits;
      }
      case StmtKind::kFor: {
        std::vector<int> into = preds;
        if (s.for_init) into = {Enter(*s.for_init, preds)};
        int header = Enter(sid, into);
        const int update = s.for_update ? node_of_.at(*s.for_update) : header;
        loops_.push_back({update, {}});
        auto body_exits = Visit(s.children.at(0), {header});
        if (s.for_update) {
          // The update is reached from the body end and from continues.
          const bool continued = std::any_of(
              cfg_.edges.begin(), cfg_.edges.end(),
              [&](const Edge& e) { return e.second == update; });
          if (body_exits.empty() && !continued)
            throw CfgError("unreachable for-loop update");
          Connect(body_exits, update);
          cfg_.edges.emplace_back(update, header);
        } else {
          Connect(body_exits, header);
        }
        std::vector<int> exits{header};
        for (int b : loops_.back().breaks) exits.push_back(b);
        loops_.pop_back();
        return exits;
      }
      case StmtKind::kDecl:
      case StmtKind::kAssign:
      case StmtKind::kExprStmt:
        return {Enter(sid, preds)};
    }
    return {};
  }

  const Method& m_;
  Cfg cfg_;
  std::unordered_map<StmtId, int> node_of_;
  std::vector<LoopTargets> loops_;
};

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::vector<std::vector<int>> Cfg::Successors() const {
  std::vector<std::vector<int>> succ(nodes.size());
  for (const auto& [a, b] : edges) succ[static_cast<std::size_t>(a)].push_back(b);
  return succ;
}

std::vector<std::vector<int>> Cfg::Predecessors() const {
  std::vector<std::vector<int>> pred(nodes.size());
  for (const auto& [a, b] : edges) pred[static_cast<std::size_t>(b)].push_back(a);
  return pred;
}

std::optional<int> Cfg::NodeOf(StmtId stmt) const {
  for (const auto& n : nodes)
    if (n.stmt && *n.stmt == stmt) return n.id;
  return std::nullopt;
}

Cfg BuildCfg(const Method& method) { return CfgBuilder(method).Build(); }

bool EveryNodeOnEntryExitPath(const Cfg& cfg) {
  auto reach = [&](int from, const std::vector<std::vector<int>>& adj) {
    std::vector<char> seen(cfg.nodes.size(), 0);
    std::deque<int> queue{from};
    seen[static_cast<std::size_t>(from)] = 1;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : adj[static_cast<std::size_t>(u)]) {
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = 1;
          queue.push_back(v);
        }
      }
    }
    return seen;
  };
  auto fwd = reach(cfg.entry, cfg.Successors());
  auto bwd = reach(cfg.exit, cfg.Predecessors());
  for (std::size_t i = 0; i < cfg.nodes.size(); ++i)
    if (!fwd[i] || !bwd[i]) return false;
  return true;
}

std::string NodeLabel(const Cfg& cfg, int id, const Method* method) {
  const CfgNode& n = cfg.nodes.at(static_cast<std::size_t>(id));
  if (n.kind == CfgNodeKind::kStart) return "start";
  if (n.kind == CfgNodeKind::kEnd) return "end";
  if (!method) return "s" + std::to_string(id);
  const Statement& s = method->stmt(*n.stmt);
  std::string label;
  for (std::size_t i = s.header.begin; i < s.header.end; ++i) {
    if (!label.empty()) label += ' ';
    label += method->tokens[i].text;
  }
  return label;
}

std::string CfgToDot(const Cfg& cfg, const Method* method) {
  std::ostringstream os;
  os << "digraph cfg {\n";
  for (const auto& n : cfg.nodes)
    os << "  n" << n.id << " [label=\"" << Escape(NodeLabel(cfg, n.id, method))
       << "\"];\n";
  for (const auto& [a, b] : cfg.edges) os << "  n" << a << " -> n" << b << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace basts
