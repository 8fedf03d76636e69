#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "CLI11.hpp"
#include "json.hpp"
#include "ldkep/attacks.hpp"
#include "ldkep/law_suite.hpp"
#include "ldkep/presets.hpp"
#include "ldkep/wire.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace ldkep;

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kExhausted = 2;
constexpr int kAbort = 3;
constexpr int kUsage = 64;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

template <class P>
json elements_json(const P& plat, const std::vector<typename P::Element>& xs) {
  json a = json::array();
  for (const auto& x : xs) a.push_back(to_hex(encode_element(plat, x)));
  return a;
}

template <class P>
json params_json(const PublicParams<P>& params, const Preset& preset) {
  json meta = json::object();
  for (const auto& [k, v] : params.meta) meta[k] = v;
  return {{"preset", preset.name},
          {"platform", preset.platform},
          {"summary", preset.summary},
          {"seed", params.seed},
          {"meta", meta},
          {"hash", to_hex(params.hash())},
          {"pool_a_size", params.pool_a.size()},
          {"pool_b_size", params.pool_b.size()},
          {"s", elements_json(*params.platform, params.s)},
          {"t", elements_json(*params.platform, params.t)}};
}

template <class P>
json messages_json(const PublicParams<P>& params, const MsgA<typename P::Element>& ma,
                   const MsgB<typename P::Element>& mb) {
  const P& plat = *params.platform;
  return {{"msg_a", {{"t_img", elements_json(plat, ma.t_img)}, {"p0", to_hex(encode_element(plat, ma.p0))}}},
          {"msg_b", {{"s_img", elements_json(plat, mb.s_img)}}}};
}

/// Deterministic in (preset, seed): timings go to stderr, not into the file.
template <class P>
json transcript_json(const PublicParams<P>& params, const Preset& preset,
                     const Transcript<typename P::Element>& tr) {
  json j{{"kind", "transcript"}, {"params", params_json(params, preset)}};
  j["session"] = {{"seed", tr.seed}, {"k_a", tr.k_a}, {"k_b", tr.k_b},
                  {"l_a", tr.l_a},   {"l_b", tr.l_b}, {"keygen_retries", tr.retries}};
  j.update(messages_json(params, tr.msg_a, tr.msg_b));
  j["key_bytes"] = to_hex(tr.key_bytes);
  j["key_confirm"] = to_hex(key_confirm(tr.key_bytes));
  return j;
}

void write_json(const json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(out);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << j.dump(2) << "\n";
}

void print_timings(const std::map<std::string, double>& t) {
  std::cerr << "timings_ms:";
  for (const auto& [k, v] : t) std::cerr << " " << k << "=" << v;
  std::cerr << "\n";
}

// ---------------------------------------------------------------------------

int cmd_laws(const std::string& platform, std::size_t samples, std::uint64_t seed, bool exhaustive) {
  std::vector<std::string> names;
  if (platform == "all") {
    names = law_suite_names();
  } else {
    names = {platform};
  }
  bool ok = true;
  for (const auto& name : names) {
    if (exhaustive && name.rfind("laver:", 0) != 0) throw UsageError("--exhaustive only applies to laver:N");
    LawSuiteResult r;
    try {
      r = run_law_suite(name, samples, seed);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    std::cout << (r.ok() ? "ok   " : "FAIL ") << r.name << ": " << r.structure << ", " << r.checks
              << (r.exhaustive ? " exhaustive" : " sampled") << " checks, " << r.failures << " failures, " << r.ms
              << " ms\n";
    ok = ok && r.ok();
  }
  return ok ? kOk : kFail;
}

int cmd_table(int n) {
  if (n < 1 || n > 10) throw UsageError("table size must be in 1..10");
  const LaverTable t = laver_table(n);
  for (std::uint32_t k = 1; k <= t.size(); ++k) {
    for (std::uint32_t l = 1; l <= t.size(); ++l) std::cout << (l > 1 ? " " : "") << t.at(k, l);
    std::cout << "\n";
  }
  return kOk;
}

const Preset& preset_or_usage(const std::string& name) {
  try {
    return find_preset(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

int cmd_exchange(const std::string& preset_name, std::uint64_t seed, const std::string& out) {
  preset_or_usage(preset_name);
  return with_preset(preset_name, seed, [&](auto& params, const Preset& preset) {
    const auto tr = run_session(params, preset.shape, seed);
    write_json(transcript_json(params, preset, tr), out);
    std::cerr << "preset " << preset.name << " seed " << seed << " key " << to_hex(tr.key_bytes) << "\n";
    print_timings(tr.timings_ms);
    return kOk;
  });
}

int cmd_challenge(const std::string& preset_name, std::uint64_t seed, const std::string& out) {
  preset_or_usage(preset_name);
  return with_preset(preset_name, seed, [&](auto& params, const Preset& preset) {
    const auto tr = run_session(params, preset.shape, seed);
    json j{{"kind", "challenge"}, {"params", params_json(params, preset)}};
    j.update(messages_json(params, tr.msg_a, tr.msg_b));
    write_json(j, out);
    return kOk;
  });
}

// ---------------------------------------------------------------------------
// attack jobs

struct JobSpec {
  std::string platform, preset, route;
  std::uint64_t seed = 1;
  SearchBudget budget;
};

JobSpec parse_job(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read job spec " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw UsageError(std::string("job spec is not JSON: ") + e.what());
  }
  JobSpec job;
  try {
    job.platform = j.at("platform").get<std::string>();
    job.preset = j.at("preset").get<std::string>();
    job.seed = j.at("seed").get<std::uint64_t>();
    job.route = j.at("route").get<std::string>();
    if (j.contains("budgets")) {
      const auto& b = j["budgets"];
      job.budget.max_candidates = b.value("max_candidates", job.budget.max_candidates);
      job.budget.max_depth = b.value("max_depth", job.budget.max_depth);
      job.budget.max_internal = b.value("max_internal", job.budget.max_internal);
      job.budget.max_closure = b.value("max_closure", job.budget.max_closure);
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad job spec: ") + e.what());
  }
  const Preset& preset = preset_or_usage(job.preset);
  if (preset.platform != job.platform)
    throw UsageError("preset " + job.preset + " runs on platform " + preset.platform + ", not " + job.platform);
  if (job.route != "sccp") {
    try {
      parse_route(job.route);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  return job;
}

template <class E>
json attack_json(const std::string& route, const AttackResult<E>& res, const Digest& session_key) {
  json a{{"route", route},
         {"found", res.key.has_value()},
         {"explored", res.stats.explored},
         {"budget_hit", res.stats.budget_hit},
         {"k_a", res.k_a},
         {"k_b", res.k_b},
         {"used_pseudo_a0", res.used_a0}};
  if (res.key) {
    a["key_bytes"] = to_hex(*res.key);
    a["matches_session"] = *res.key == session_key;
  } else {
    a["failure"] = res.failure;
  }
  return a;
}

int cmd_attack(const std::string& job_path, const std::string& out) {
  const JobSpec job = parse_job(job_path);
  return with_preset(job.preset, job.seed, [&](auto& params, const Preset& preset) -> int {
    using P = std::decay_t<decltype(*params.platform)>;
    const auto tr = run_session(params, preset.shape, job.seed);
    json report = transcript_json(params, preset, tr);
    std::optional<AttackResult<typename P::Element>> res;
    if constexpr (std::is_same_v<P, LaverPlatform> || std::is_same_v<P, PermPlatform>) {
      AttackContext<P> ctx{&params, {}, job.budget};
      if constexpr (std::is_same_v<P, LaverPlatform>) {
        ctx.carrier = params.platform->all_elements();
      } else if (job.route != "sccp") {
        if (params.platform->degree() > 6) throw UsageError("exhaustive attacks need S_N with N <= 6");
        ctx.carrier = all_perms(params.platform->degree());
      }
      if (job.route == "sccp") {
        if constexpr (std::is_same_v<P, PermPlatform>) {
          if (!params.meta.count("p")) throw UsageError("route sccp needs a shifted-conjugacy preset");
          res = sccp_attack(ctx, tr.msg_a, tr.msg_b, static_cast<std::uint32_t>(params.meta.at("p")),
                            static_cast<std::uint32_t>(params.meta.at("q1")),
                            static_cast<std::uint32_t>(params.meta.at("q2")));
        } else {
          throw UsageError("route sccp needs a permutation preset");
        }
      } else {
        res = run_attack(ctx, parse_route(job.route), tr.msg_a, tr.msg_b);
      }
    } else {
      throw UsageError("attacks run on enumerable platforms only (laver, perm)");
    }
    report["attack"] = attack_json(job.route, *res, tr.key_bytes);
    write_json(report, out);
    if (!res->key) {
      std::cerr << "not found: " << res->failure << "\n";
      return kExhausted;
    }
    const bool match = *res->key == tr.key_bytes;
    std::cerr << "route " << job.route << ": recovered key " << (match ? "matches" : "DIFFERS FROM") << " session key\n";
    return match ? kOk : kFail;
  });
}

// ---------------------------------------------------------------------------

int cmd_peer(const std::string& listen, const std::string& connect, const std::string& preset_name,
             std::uint64_t seed, const std::string& out) {
  if (listen.empty() == connect.empty()) throw UsageError("give exactly one of --listen or --connect");
  preset_or_usage(preset_name);
  try {
    parse_host_port(listen.empty() ? connect : listen);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return with_preset(preset_name, seed, [&](auto& params, const Preset& preset) -> int {
    Socket sock;
    PeerRole role;
    if (!listen.empty()) {
      Listener l(listen);
      std::cerr << "listening on port " << l.port() << "\n";
      sock = l.accept();
      role = PeerRole::alice;
    } else {
      sock = connect_to(connect);
      role = PeerRole::bob;
    }
    const auto res = run_peer(params, preset.shape, seed, role, sock);
    json j{{"kind", "peer"},
           {"role", role == PeerRole::alice ? "alice" : "bob"},
           {"params", params_json(params, preset)},
           {"session", {{"seed", seed}, {"k", res.k}, {"l", res.l}, {"keygen_retries", res.retries}}}};
    j.update(messages_json(params, res.msg_a, res.msg_b));
    j["key_bytes"] = to_hex(res.key_bytes);
    j["key_confirm"] = to_hex(res.own);
    j["peer_key_confirm"] = to_hex(res.peer);
    j["confirmed"] = res.confirmed();
    if (!out.empty()) write_json(j, out);
    std::cout << "key-confirm " << to_hex(res.own) << " peer " << to_hex(res.peer) << " "
              << (res.confirmed() ? "match" : "MISMATCH") << "\n";
    return res.confirmed() ? kOk : kAbort;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Left-distributive key establishment: law checks, sessions, challenges, attacks, peers"};
  app.require_subcommand(1);

  std::string platform = "all";
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  bool exhaustive = false;
  int n = 0;
  std::string preset, out, job, listen, connect;

  auto* laws = app.add_subcommand("laws", "check distributivity laws of the registered structures");
  laws->add_option("--platform", platform, "laver:N, conj, symm, shifted, braid-shifted, braid-pools, "
                                           "sym-pools, frob, fsymm-trunc, fsymm-ratfn or all");
  laws->add_option("--samples", samples, "random triples per law")->check(CLI::PositiveNumber);
  laws->add_option("--seed", seed);
  laws->add_flag("--exhaustive", exhaustive, "all triples (Laver tables)");

  auto* table = app.add_subcommand("table", "print the Laver table L_n");
  table->add_option("n,--n", n, "exponent, table size 2^n")->required();

  auto* exchange = app.add_subcommand("exchange", "run one session and write its transcript");
  auto* challenge = app.add_subcommand("challenge", "write public parameters and messages only");
  for (auto* sub : {exchange, challenge}) {
    sub->add_option("--preset", preset)->required();
    sub->add_option("--seed", seed);
    sub->add_option("--out", out, "output file, stdout if omitted");
  }

  auto* attack = app.add_subcommand("attack", "run an attack job");
  attack->add_option("job,--job", job, "job spec JSON")->required();
  attack->add_option("--out", out);

  auto* peer = app.add_subcommand("peer", "run one party over TCP (listen: Alice, connect: Bob)");
  peer->add_option("--listen", listen, "host:port");
  peer->add_option("--connect", connect, "host:port");
  peer->add_option("--preset", preset)->required();
  peer->add_option("--seed", seed);
  peer->add_option("--out", out);

  auto* list = app.add_subcommand("presets", "list presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*laws) return cmd_laws(platform, samples, seed, exhaustive);
    if (*table) return cmd_table(n);
    if (*exchange) return cmd_exchange(preset, seed, out);
    if (*challenge) return cmd_challenge(preset, seed, out);
    if (*attack) return cmd_attack(job, out);
    if (*peer) return cmd_peer(listen, connect, preset, seed, out);
    if (*list) {
      for (const auto& p : presets()) std::cout << p.name << "  [" << p.platform << "]  " << p.summary << "\n";
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ProtocolAbort& e) {
    std::cerr << "protocol abort: " << e.what() << "\n";
    return kAbort;
  } catch (const FrameError& e) {
    std::cerr << "framing error: " << e.what() << "\n";
    return kAbort;
  } catch (const DecodeError& e) {
    std::cerr << "framing error: " << e.what() << "\n";
    return kAbort;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
