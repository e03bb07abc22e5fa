// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "dvbsym/io.hpp"
#include "support.hpp"

using namespace dvbsym;
using namespace dvbsym::testing;

namespace {

using Clock = std::chrono::steady_clock;

double secondsSince(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      detail = why;
    }
  }
};

bool allPassed = true;

void report(int id, const std::string& title, double budget, const std::function<Outcome()>& body) {
  auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double t = secondsSince(start);
  if (budget > 0 && t >= budget) o.require(false, "over budget");
  allPassed = allPassed && o.pass;
  std::printf("criterion %d %-44s %s  %6.2fs  %s\n", id, title.c_str(), o.pass ? "PASS" : "FAIL", t,
              o.detail.c_str());
  std::fflush(stdout);
}

// dims with every space at most maxDim and a regular configuration available
SquareDims regularDims(Rng& rng, size_t maxDim) {
  for (;;) {
    size_t m1 = 1 + rng.index(3);
    SquareDims d{m1, m1 + rng.index(3), m1 + rng.index(3), 0};
    d.n2 = d.n1 + d.m2 - d.m1 + rng.index(3);
    if (d.n2 <= maxDim) return d;
  }
}

// dims for the criterion-agreement family, which includes non-regular squares
SquareDims anyDims(Rng& rng, size_t maxDim) {
  for (;;) {
    size_t m1 = 1 + rng.index(3);
    SquareDims d{m1, m1 + rng.index(3), m1 + rng.index(3), 0};
    d.n2 = std::max(d.m2, d.n1) + rng.index(3);
    if (d.n2 <= maxDim) return d;
  }
}

ImmersionSquare firstCoordinateSquare() {
  return {1, 3, 5, 6, standardInclusion(3, 1), standardInclusion(6, 5), standardInclusion(5, 1),
          standardInclusion(6, 3)};
}

NormalBundle nuOf(const Matrix& j) { return normalBundle(plainSpace("M", j.cols()), plainSpace("N", j.rows()), j); }

constexpr size_t kRegularSamples = 200;

}  // namespace

int main() {
  auto suiteStart = Clock::now();

  report(1, "regularity criteria agree (500 squares)", 10, [] {
    Outcome o;
    Rng rng(101);
    size_t regular = 0, irregular = 0;
    for (uint64_t seed = 0; seed < 500; ++seed) {
      ImmersionSquare sq = randomSquare(1000 + seed, anyDims(rng, 6));
      RegularityReport r = regularityReport(squareNormals(sq));
      o.require(r.agree, "criteria disagree at seed " + std::to_string(1000 + seed));
      (r.regular ? regular : irregular)++;
    }
    o.require(regular > 0 && irregular > 0, "family is not mixed");
    o.detail = o.pass ? std::to_string(regular) + " regular, " + std::to_string(irregular) + " non-regular"
                      : o.detail;
    return o;
  });

  // built under criterion 2 and shared with criteria 4 and 8
  std::vector<SymmetryData> data;

  report(2, "symmetry isomorphism (200 regular squares)", 60, [&] {
    Outcome o;
    Rng rng(202);
    for (uint64_t seed = 0; seed < kRegularSamples; ++seed)
      data.push_back(symmetryData(randomRegularSquare(2000 + seed, regularDims(rng, 8))));
    o.require(data.size() == kRegularSamples, "only " + std::to_string(data.size()) + " samples built");
    for (size_t k = 0; k < data.size(); ++k) {
      SymmetryCertificate c = certify(data[k], false);
      const std::string at = " at sample " + std::to_string(k);
      o.require(c.regular, "not regular" + at);
      o.require(c.bijective, "lambda not bijective" + at);
      o.require(c.flipEquivariant, "lambda not flip-equivariant" + at);
      o.require(c.altAgreement, "routes disagree" + at);
    }
    // a perturbed section in the final quotient; reported only
    Rng sections(303);
    size_t same = 0;
    for (const auto& d : data) same += sectionChangeAgreement(d, sections);
    if (o.pass) o.detail = "lambda unchanged under section change on " + std::to_string(same) + "/" +
                           std::to_string(data.size());
    return o;
  });

  report(3, "regression squares", 0, [] {
    Outcome o;
    RegularityReport bad = isRegular(firstCoordinateSquare());
    o.require(!bad.regular, "first-coordinate square reported regular");
    bool named = false;
    for (const auto& d : bad.diagnostics) named = named || d.find("dimension issue") != std::string::npos;
    o.require(named, "no dimension-issue diagnostic");
    ImmersionSquare corner = cornerSquare(standardInclusion(2, 1), standardInclusion(3, 2));
    o.require(isRegular(corner).regular, "corner square reported non-regular");
    return o;
  });

  report(4, "lemma suite (10 lemmas x 200 squares)", 0, [&] {
    Outcome o;
    o.require(data.size() >= 100, "fewer than 100 samples");
    for (const auto& name : lemmaNames())
      for (size_t k = 0; k < data.size(); ++k) {
        LemmaResult r = verifyLemma(name, data[k]);
        o.require(r.pass, name + " fails at sample " + std::to_string(k) + ": " + r.detail);
      }
    return o;
  });

  report(5, "normal differential functoriality", 0, [] {
    Outcome o;
    Rng rng(505);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Matrix> js;
      for (int k = 0; k < 3; ++k) {
        size_t m = 1 + rng.index(3), n = m + rng.index(3);
        js.push_back(rng.injective(n, m));
      }
      TwoMap F = randomTwoMap(rng, js[0], js[1]), G = randomTwoMap(rng, js[1], js[2]);
      NormalBundle n0 = nuOf(js[0]), n1 = nuOf(js[1]), n2 = nuOf(js[2]);
      o.require(normalDifferential(hCompose(G, F), n0, n2) == normalDifferential(G, n1, n2) * normalDifferential(F, n0, n1),
                "horizontal functoriality fails at trial " + std::to_string(trial));
    }
    size_t vertical = 0;
    for (uint64_t seed = 0; vertical < 100 && seed < 1000; ++seed) {
      ImmersionSquare sq = randomRegularSquare(5000 + seed, regularDims(rng, 6));
      TwoMap K{sq.i1, sq.i2, sq.j1, sq.j2};
      auto H = twoMapOver(rng, K, rng.index(sq.m1 + 1), sq.m1 + rng.index(2));
      if (!H) continue;
      auto c = verticalFunctoriality(*H, K);
      o.require(c.exactSequences && c.commutes, "splitting diagram fails at seed " + std::to_string(5000 + seed));
      ++vertical;
    }
    o.require(vertical >= 100, "only " + std::to_string(vertical) + " vertical pairs");
    return o;
  });

  report(6, "quotient compatibilities (3 x 100)", 0, [] {
    Outcome o;
    Rng rng(606);
    for (int trial = 0; trial < 100; ++trial) {
      QuotientTangentSample s = quotientTangentSample(rng);
      QuotientTangent a = quotientTangent(s.e1.space, s.f1.space, s.iota1);
      QuotientTangent b = quotientTangent(s.e2.space, s.f2.space, s.iota2);
      o.require(isBijective(a.iso) && quotientTangentNatural(a, b, s.iota1, s.iota2, s.phi, s.psi),
                "quotient-tangent naturality fails at trial " + std::to_string(trial));
    }
    for (int trial = 0; trial < 100; ++trial) {
      PullbackQuotientSample s = pullbackQuotientSample(rng);
      PullbackQuotientIso r = pullbackQuotientIso(s.u.space, s.v.space, s.k, s.d.space, s.q.space, s.iota, s.phi,
                                                  s.psi, s.orientation);
      o.require(isBijective(r.iso) && isDVBMap(r.lhs.X.dvs(), r.rhs.P.dvs(), r.iso),
                "pullback-quotient iso fails at trial " + std::to_string(trial));
    }
    for (int trial = 0; trial < 100; ++trial) {
      QuotientFlipSample s = quotientFlipSample(rng);
      PresentedQuotient q1 = quotientV(s.d1.space, s.iota1, s.p1.space);
      PresentedQuotient qf = quotientH(s.flipD1, s.iota1, s.flipP1);
      PresentedQuotient q2 = quotientH(s.d2.space, s.iota2, s.p2.space);
      Matrix lhs = quotientDVBMap(s.phi, s.psi, s.iota1, s.iota2, qf, q2) *
                   quotientFlip(s.flipD, s.flipP, s.iota1, s.iota1, q1, qf);
      Matrix rhs = quotientFlip(s.phi * s.flipD, s.psi * s.flipP, s.iota1, s.iota2, q1, q2);
      o.require(lhs == rhs, "quotient-flip identity fails at trial " + std::to_string(trial));
    }
    return o;
  });

  report(7, "double-category laws on LinSq (500 grids)", 0, [] {
    Outcome o;
    for (const LawReport& r : linSqLaws(707, 500)) {
      o.require(r.pass(), r.axiom + ": " + r.firstWitness.value_or("no trials"));
      if (r.axiom == "interchange") o.require(r.trials >= 500, "fewer than 500 interchange grids");
    }
    return o;
  });

  report(8, "core rank formula", 0, [&] {
    Outcome o;
    o.require(!data.empty(), "no samples");
    for (size_t k = 0; k < data.size(); ++k) {
      const ImmersionSquare& sq = data[k].normals.sq;
      const size_t expected = sq.n2 - rank(hstack({sq.i2, sq.j2}));
      o.require(data[k].dnJ.dvs().coreRank() == expected && data[k].dnI.dvs().coreRank() == expected,
                "core rank differs at sample " + std::to_string(k));
    }
    return o;
  });

  const double total = secondsSince(suiteStart);
  report(9, "whole-suite budget", 0, [&] {
    Outcome o;
    o.require(total < 120, "suite took " + std::to_string(total) + "s");
    o.detail = o.pass ? "total " + std::to_string(total) + "s" : o.detail;
    return o;
  });

  return allPassed ? 0 : 1;
}
