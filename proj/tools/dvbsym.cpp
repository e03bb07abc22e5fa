// dvbsym: regularity checks, symmetry certificates and law suites from the command line.
//
// Exit codes: 0 pass, 1 mathematical failure, 2 input or configuration error.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dvbsym/io.hpp"

using namespace dvbsym;

namespace {

enum Exit { kPass = 0, kFail = 1, kInputError = 2 };

struct RunConfig {
  std::string command;
  std::string input;
  uint64_t seed = 1;
  size_t trials = 500;
  std::vector<size_t> dims{1, 2, 2, 4};
  std::string output;
  std::string format = "human";
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output);
  if (!out) throw InputError("cannot write '" + cfg.output + "'");
  out << text;
}

std::string machine(const Json& j) { return j.dump(2) + "\n"; }

// A linear square, or the linearization of a polynomial square at its point.
ImmersionSquare loadSquare(const RunConfig& cfg) {
  Json doc = parseJson(readFile(cfg.input));
  if (isPolyInput(doc)) {
    PolyInput p = polyInputFromJson(doc);
    return linearizeSquareAt(p.square, p.point);
  }
  ImmersionSquare sq = squareFromJson(doc);
  try {
    validate(sq);
  } catch (const std::exception& e) {
    throw InputError(cfg.input + ": " + e.what());
  }
  return sq;
}

std::string yesNo(bool b) { return b ? "yes" : "no"; }

std::string regularityTable(const RegularityReport& r) {
  std::ostringstream os;
  os << std::left << std::setw(44) << "criterion" << "holds\n";
  os << std::setw(44) << "(1) nu2(J) is a vb-immersion" << yesNo(r.criterion1) << "\n";
  os << std::setw(44) << "(2) nu2(I) is a vb-immersion" << yesNo(r.criterion2) << "\n";
  os << std::setw(44) << "(3) 0 -> TM1 -> TN1 x TM2 -> TN2 exact" << yesNo(r.criterion3) << "\n";
  os << std::setw(44) << "criteria agree" << yesNo(r.agree) << "\n";
  os << "normal ranks: i1 " << r.rankNuI1 << ", i2 " << r.rankNuI2 << ", j1 " << r.rankNuJ1 << ", j2 " << r.rankNuJ2
     << "\n";
  for (const auto& d : r.diagnostics) os << "  " << d << "\n";
  os << "regular: " << yesNo(r.regular) << "\n";
  return os.str();
}

int cmdCheck(const RunConfig& cfg) {
  ImmersionSquare sq = loadSquare(cfg);
  RegularityReport r = regularityReport(squareNormals(sq));
  if (cfg.format == "machine")
    emit(cfg, machine({{"regular", r.regular}, {"criteria", toJson(r)}}));
  else
    emit(cfg, regularityTable(r));
  if (!r.agree) return kFail;
  return r.regular ? kPass : kFail;
}

int cmdVerify(const RunConfig& cfg) {
  ImmersionSquare sq = loadSquare(cfg);
  SymmetryCertificate c = symmetryIso(sq);
  if (cfg.format == "machine") {
    emit(cfg, machine(toJson(c)));
  } else {
    std::ostringstream os;
    os << regularityTable(c.regularity);
    if (c.regular) {
      os << std::left << std::setw(24) << "check" << "result\n";
      os << std::setw(24) << "lambda bijective" << yesNo(c.bijective) << "\n";
      os << std::setw(24) << "flip-equivariant" << yesNo(c.flipEquivariant) << "\n";
      os << std::setw(24) << "sides match" << yesNo(c.sidesMatch) << "\n";
      os << std::setw(24) << "routes agree" << yesNo(c.altAgreement) << "\n";
      os << std::setw(24) << "core rank" << c.coreRankJ << " / " << c.coreRankI << " (oracle " << c.coreOracle
         << ")\n";
      for (const auto& l : c.lemmas)
        os << std::setw(24) << l.name << (l.pass ? "pass" : "FAIL " + l.detail) << "\n";
      if (!c.error.empty()) os << "error: " << c.error << "\n";
    }
    emit(cfg, os.str());
  }
  return passes(c) ? kPass : kFail;
}

int cmdLaws(const RunConfig& cfg) {
  auto reports = linSqLaws(cfg.seed, cfg.trials);
  bool ok = true;
  for (const auto& r : reports) ok = ok && r.pass();
  if (cfg.format == "machine") {
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(toJson(r));
    emit(cfg, machine({{"seed", cfg.seed}, {"trials", cfg.trials}, {"laws", arr}, {"pass", ok}}));
  } else {
    std::ostringstream os;
    os << std::left << std::setw(18) << "axiom" << std::setw(10) << "trials" << "failures\n";
    for (const auto& r : reports) {
      os << std::setw(18) << r.axiom << std::setw(10) << r.trials << r.failures << "\n";
      if (r.firstWitness) os << "  first witness: " << *r.firstWitness << "\n";
    }
    emit(cfg, os.str());
  }
  return ok ? kPass : kFail;
}

SquareDims configDims(const RunConfig& cfg) {
  if (cfg.dims.size() != 4) throw InputError("--dims expects four values M1 M2 N1 N2");
  SquareDims d{cfg.dims[0], cfg.dims[1], cfg.dims[2], cfg.dims[3]};
  if (!feasible(d)) throw InputError("--dims: no regular square has these dimensions");
  return d;
}

int cmdGen(const RunConfig& cfg) {
  ImmersionSquare sq = randomRegularSquare(cfg.seed, configDims(cfg));
  emit(cfg, machine(toJson(sq)));
  return kPass;
}

int cmdLinearize(const RunConfig& cfg) {
  Json doc = parseJson(readFile(cfg.input));
  if (!isPolyInput(doc)) throw InputError("linearize expects a polynomial square (\"poly\": true)");
  PolyInput p = polyInputFromJson(doc);
  emit(cfg, machine(toJson(linearizeSquareAt(p.square, p.point))));
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Double vector bundle symmetry of regular immersion squares"};
  app.require_subcommand(1);
  RunConfig cfg;
  auto addCommon = [&](CLI::App* sub, bool needsInput) {
    if (needsInput) sub->add_option("input", cfg.input, "square file (JSON)")->required();
    sub->add_option("-o,--output", cfg.output, "write the report here instead of stdout");
    sub->add_option("--format", cfg.format, "human or machine")->check(CLI::IsMember({"human", "machine"}));
  };
  auto* check = app.add_subcommand("check", "decide regularity of a square");
  addCommon(check, true);
  auto* verify = app.add_subcommand("verify", "build the symmetry certificate of a regular square");
  addCommon(verify, true);
  auto* laws = app.add_subcommand("laws", "run the double-category law suite on LinSq");
  addCommon(laws, false);
  laws->add_option("--seed", cfg.seed, "random seed");
  laws->add_option("--trials", cfg.trials, "number of grids")->check(CLI::PositiveNumber);
  auto* gen = app.add_subcommand("gen", "emit a seeded regular square");
  addCommon(gen, false);
  gen->add_option("--seed", cfg.seed, "random seed");
  gen->add_option("--dims", cfg.dims, "M1 M2 N1 N2")->expected(4);
  auto* lin = app.add_subcommand("linearize", "emit the tangent square of a polynomial square");
  addCommon(lin, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    if (cfg.command == "check") return cmdCheck(cfg);
    if (cfg.command == "verify") return cmdVerify(cfg);
    if (cfg.command == "laws") return cmdLaws(cfg);
    if (cfg.command == "gen") return cmdGen(cfg);
    if (cfg.command == "linearize") return cmdLinearize(cfg);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const DimensionError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const ImmersionError& e) {
    std::cerr << "immersion failure: " << e.what() << "\n";
    return kFail;
  } catch (const CompatibilityError& e) {
    std::cerr << "square does not commute: " << e.what() << "\n";
    return kFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kInputError;
}
