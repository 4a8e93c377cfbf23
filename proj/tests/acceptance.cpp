// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if all pass.

#include "nabla/nabla.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace nabla;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> run;
};

Outcome from_verdict(const Verdict& v) { return {v.pass, v.observed}; }

Outcome per_connection(const std::vector<Connection>& conns, const std::function<bool(const BianchiCheck&)>& ok) {
  std::size_t passed = 0;
  for (const auto& c : conns) passed += ok(check_identities(c));
  return {passed == conns.size(), std::to_string(passed) + "/" + std::to_string(conns.size()) + " connections"};
}

}  // namespace

int main() {
  const Connection test = reference_connection();
  const RandomConnectionSpec spec;
  std::vector<Connection> seeded;

  std::vector<Criterion> criteria{
      {1, "generator rank 19", 30, [&] { return from_verdict(verify_generator_rank(test)); }},
      {2, "differential kernel span{e2-e13, e4, e7}", 120, [&] { return from_verdict(verify_closed_kernel(test)); }},
      {3, "closed combinations match the natural forms", 120, [&] { return from_verdict(verify_closed_forms(test)); }},
      {4, "four natural 3-forms independent", 60, [&] { return from_verdict(verify_three_forms(test)); }},
      {5, "coupled system solution span{(1,0,1,0,0)}", 120, [&] { return from_verdict(verify_coupled_system(test)); }},
      {6, "first and second Bianchi identities on seeded connections", 120,
       [&] {
         seeded = random_connections(spec, 20);
         return per_connection(seeded, [](const BianchiCheck& b) { return b.first && b.second; });
       }},
      {7, "N0 = Tor/2 and N1 full symmetrization vanishes", 120,
       [&] { return per_connection(seeded, [](const BianchiCheck& b) { return b.normal0 && b.s2; }); }},
      {8, "dropped generator in span{T5, T6, T8, T9, T11}", 30,
       [&] {
         auto v = verify_dropped_generator(test);
         return Outcome{v.pass, v.observed + ", coefficients " + v.certificate.value("coefficients", nlohmann::json()).dump()};
       }},
      {9, "d_nabla I = Tor on seeded connections", 60,
       [&] { return per_connection(seeded, [](const BianchiCheck& b) { return b.identity; }); }},
      {10, "contraction scheme counts and generator containment", 120,
       [&] { return from_verdict(verify_schemes(test)); }},
      {11, "Tor and H rank 2; traceless torsion gives H = 0 and rank 1", 30,
       [&] {
         auto v = verify_torsion_h_independence(test);
         auto nf = natural_forms(traceless_torsion_connection());
         bool h_zero = nf.h.field().is_zero();
         std::size_t degenerate = rank_of({nf.tor.field(), nf.h.field()});
         return Outcome{v.pass && h_zero && degenerate == 1,
                        v.observed + "; traceless: H " + (h_zero ? "= 0" : "!= 0") + ", rank " +
                            std::to_string(degenerate)};
       }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = o.pass && secs < c.budget_seconds;
    failures += !pass;
    std::printf("%s criterion %d: %s (%s; %.3fs, budget %.0fs)\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), secs, c.budget_seconds);
  }
  std::printf("%s: %zu criteria, %d failed\n", failures ? "FAILED" : "ALL PASS", criteria.size(), failures);
  return failures ? 1 : 0;
}
