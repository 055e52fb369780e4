#include "entroframe/cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "entroframe/bounds.hpp"
#include "entroframe/entropy.hpp"
#include "entroframe/explorer.hpp"
#include "entroframe/frames.hpp"
#include "entroframe/pframes.hpp"

namespace entroframe::cli {

namespace {

using nlohmann::json;

/// Bad input detected after parsing; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string timestamp_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << text;
}

/// Wraps a report with the run config, its hash and a timestamp. The hash covers
/// the run config only, so re-running a config reproduces it.
std::string finish_report(json run_config, json body) {
  json j;
  j["generated_at"] = timestamp_utc();
  j["config_hash"] = fnv1a_hex(run_config.dump());
  j["run_config"] = std::move(run_config);
  for (auto& [k, v] : body.items()) j[k] = std::move(v);
  return j.dump(2) + "\n";
}

struct OptimizerFlags {
  OptimizerConfig cfg;
  void add(CLI::App* app) {
    app->add_option("--restarts", cfg.restarts, "multi-start count")->capture_default_str();
    app->add_option("--max-iters", cfg.max_iters, "iterations per start")->capture_default_str();
    app->add_option("--step-tol", cfg.step_tol)->capture_default_str();
    app->add_option("--grad-tol", cfg.grad_tol)->capture_default_str();
    app->add_option("--barrier-eps", cfg.barrier_eps)->capture_default_str();
  }
};

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("expected a comma-separated integer list, got '" + s + "'");
    }
  }
  return out;
}

// --- gen -------------------------------------------------------------------

struct GenOptions {
  std::string builder;
  long dim = 2;
  long atoms = 0;
  long nodes = 0;
  double offset = 0.0;
  std::uint64_t seed = 0;
  std::string field = "C";
  double p = 2.0;
  std::string role = "functionals";
  std::string splits;
  double lambda = 1.0;
  std::string output;
};

int cmd_gen(const GenOptions& o, std::ostream& out) {
  const Field field = field_from_string(o.field);
  json doc;
  std::ostringstream summary;
  summary << std::setprecision(6) << std::scientific;
  auto hilbert = [&](const FrameFamily& f) {
    doc = f;
    summary << "parseval_defect " << parseval_defect(f) << "\n"
            << "one_bounded_excess " << one_bounded_excess(f) << "\n";
  };
  auto banach = [&](const PFrameBase& f) {
    doc = f;
    summary << "parseval_p_defect " << parseval_p_defect(f) << "\n"
            << "one_bounded_excess " << f.max_element_norm() - 1.0 << "\n";
  };
  const PRole role = o.role == "vectors" ? PRole::Vectors : PRole::Functionals;
  if (o.role != "vectors" && o.role != "functionals") throw UsageError("--role must be functionals or vectors");

  if (o.builder == "onb") {
    hilbert(make_onb(o.dim, field));
  } else if (o.builder == "fourier") {
    hilbert(make_fourier(o.dim));
  } else if (o.builder == "circle") {
    if (o.nodes < 2) throw UsageError("circle builder needs --nodes >= 2");
    hilbert(make_circle_frame(static_cast<std::size_t>(o.nodes), o.offset));
  } else if (o.builder == "mercedes") {
    hilbert(make_mercedes());
  } else if (o.builder == "random-parseval") {
    if (o.atoms < 1) throw UsageError("random-parseval needs --atoms");
    hilbert(make_random_parseval(o.dim, static_cast<std::size_t>(o.atoms), o.seed, field));
  } else if (o.builder == "coordinate-pframe") {
    const Field pf = o.field == "C" ? Field::Real : field;  // coordinate frames default to real
    if (role == PRole::Functionals)
      banach(make_coordinate_pframe(o.dim, o.p, pf));
    else
      banach(make_coordinate_pvectors(o.dim, o.p, pf));
  } else if (o.builder == "split-pframe") {
    const std::vector<int> splits =
        o.splits.empty() ? std::vector<int>(static_cast<std::size_t>(std::max(o.dim, 0L)), 1) : parse_int_list(o.splits);
    const Field pf = o.field == "C" ? Field::Real : field;
    if (role == PRole::Functionals)
      banach(make_split_coordinate_pframe(o.dim, o.p, splits, o.lambda, pf));
    else
      banach(make_split_coordinate_pvectors(o.dim, o.p, splits, o.lambda, pf));
  } else {
    throw UsageError("unknown builder '" + o.builder +
                     "' (onb, fourier, circle, mercedes, random-parseval, coordinate-pframe, split-pframe)");
  }
  const std::string text = doc.dump(2) + "\n";
  emit(text, o.output, out);
  if (!o.output.empty()) out << summary.str();
  return kOk;
}

// --- frame loading ---------------------------------------------------------

using AnyFrame = std::variant<FrameFamily, PFrameBase>;

AnyFrame load_frame(const std::string& path) {
  const json j = read_json_file(path);
  try {
    if (j.contains("p")) return pframe_from_json(j);
    return frame_from_json(j);
  } catch (const InvalidArgument& e) {
    throw UsageError("'" + path + "': " + e.what());
  }
}

json describe(const FrameFamily& f) {
  json j = summarize(f);
  j["parseval_defect"] = parseval_defect(f);
  j["one_bounded_excess"] = one_bounded_excess(f);
  return j;
}

json describe(const PFrameBase& f, double defect) {
  return json{{"p", f.p()},
              {"role", to_string(f.role())},
              {"mode", f.mode()},
              {"dim", f.dim()},
              {"atoms", f.size()},
              {"total_mass", f.measure().total_mass()},
              {"parseval_p_defect", defect},
              {"one_bounded_excess", f.max_element_norm() - 1.0}};
}

void gate(const FrameFamily& f, const std::string& name) {
  const double defect = parseval_defect(f);
  if (defect > kParsevalGate) {
    std::ostringstream os;
    os << name << " is not Parseval within tolerance (defect " << std::setprecision(6) << defect << " > "
       << kParsevalGate << ")";
    throw UsageError(os.str());
  }
  if (!is_one_bounded(f)) throw UsageError(name + " is not 1-bounded");
}

double gate(const PFrameBase& f, const std::string& name) {
  const double defect = parseval_p_defect(f);
  if (!(defect <= kParsevalPGate)) {
    std::ostringstream os;
    os << name << " is not Parseval-p within tolerance (sampled defect " << std::setprecision(6) << defect << ")";
    throw UsageError(os.str());
  }
  if (!f.one_bounded()) throw UsageError(name + " is not 1-bounded");
  return defect;
}

json file_inputs(const std::string& a, const std::string& b) {
  return json{{"frame_a", {{"path", a}, {"content_hash", fnv1a_hex(read_text(a))}}},
              {"frame_b", {{"path", b}, {"content_hash", fnv1a_hex(read_text(b))}}}};
}

// --- verify ----------------------------------------------------------------

struct VerifyOptions {
  std::string frame_a, frame_b;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  double tol = kDefaultVerifyTol;
  std::optional<double> p;
  std::string output;
  OptimizerFlags opt;
};

int cmd_verify(VerifyOptions o, std::ostream& out) {
  AnyFrame a = load_frame(o.frame_a);
  AnyFrame b = load_frame(o.frame_b);
  if (a.index() != b.index()) throw UsageError("cannot mix a Hilbert frame with a p-frame");
  if (o.samples < 1) throw UsageError("--samples must be >= 1");
  o.opt.cfg.seed = o.seed;
  try {
    o.opt.cfg.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }

  json run_config = file_inputs(o.frame_a, o.frame_b);
  run_config["command"] = "verify";
  run_config["samples"] = o.samples;
  run_config["seed"] = o.seed;
  run_config["tol"] = o.tol;
  run_config["p"] = o.p ? json(*o.p) : json(nullptr);

  json body;
  bool passed = true;
  std::optional<PFrameBase> pa, pb;
  if (auto* fa = std::get_if<FrameFamily>(&a)) {
    const auto& fb = std::get<FrameFamily>(b);
    if (fa->dim() != fb.dim()) throw UsageError("frames differ in dimension");
    gate(*fa, "frame A");
    gate(fb, "frame B");
    if (!o.p) {
      const BatchReport batch = verify_batch(*fa, fb, o.samples, o.seed, o.tol);
      body["mode"] = "hilbert";
      body["frames"] = {{"a", describe(*fa)}, {"b", describe(fb)}};
      body["coherence"] = batch.worst.coherence;
      body["batch"] = batch;
      passed = batch.failures == 0;
    } else {
      if (*o.p != 2.0) throw UsageError("Hilbert frames are Parseval p-frames only for --p 2");
      pa = functionals_from_frame(*fa);
      pb = functionals_from_frame(fb);
    }
  } else {
    pa = std::get<PFrameBase>(a);
    pb = std::get<PFrameBase>(b);
    if (pa->p() != pb->p()) throw UsageError("p-frames differ in exponent");
    if (o.p && *o.p != pa->p()) throw UsageError("--p does not match the p-frame files");
    if (pa->role() != pb->role()) throw UsageError("p-frames differ in role");
    if (pa->dim() != pb->dim()) throw UsageError("p-frames differ in dimension");
  }
  if (pa) {
    const double da = gate(*pa, "frame A");
    const double db = gate(*pb, "frame B");
    run_config["optimizer"] = o.opt.cfg;
    const PBatchReport batch = verify_p_batch(*pa, *pb, o.samples, o.opt.cfg, o.tol);
    body["mode"] = "p-frame";
    body["theorem"] = pa->role() == PRole::Functionals ? "functional" : "dual";
    body["frames"] = {{"a", describe(*pa, da)}, {"b", describe(*pb, db)}};
    body["batch"] = batch;
    passed = batch.failures == 0;
  }
  body["passed"] = passed;
  emit(finish_report(std::move(run_config), std::move(body)), o.output, out);
  return passed ? kOk : kBoundFailure;
}

// --- probe -----------------------------------------------------------------

struct ProbeOptions {
  std::string frame_a, frame_b;
  std::uint64_t seed = 0;
  std::string output;
  std::string trace_csv;
  OptimizerFlags opt;
};

int cmd_probe(ProbeOptions o, std::ostream& out) {
  AnyFrame a = load_frame(o.frame_a);
  AnyFrame b = load_frame(o.frame_b);
  auto* fa = std::get_if<FrameFamily>(&a);
  auto* fb = std::get_if<FrameFamily>(&b);
  if (!fa || !fb) throw UsageError("probe works on Hilbert frames only");
  if (fa->dim() != fb->dim()) throw UsageError("frames differ in dimension");
  gate(*fa, "frame A");
  gate(*fb, "frame B");
  o.opt.cfg.seed = o.seed;
  try {
    o.opt.cfg.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  const ProbeReport report = probe_kraus(*fa, *fb, o.opt.cfg);

  json run_config = file_inputs(o.frame_a, o.frame_b);
  run_config["command"] = "probe";
  run_config["optimizer"] = o.opt.cfg;
  json body;
  body["probe"] = report;
  emit(finish_report(std::move(run_config), std::move(body)), o.output, out);
  if (!o.trace_csv.empty()) emit(trace_csv(report.trace), o.trace_csv, out);

  if (report.deutsch_floor_breach) return kBoundFailure;
  if (report.verdict == ProbeVerdict::ViolationCandidate) return kViolationCandidate;
  return kOk;
}

// --- convergence -----------------------------------------------------------

struct ConvergenceOptions {
  std::string builder = "circle";
  std::string schedule = "8,16,32,64,128,256,512,1024";
  double angle = std::numbers::pi / 7.0;
  double offset = 0.5;
  std::string output;
};

int cmd_convergence(const ConvergenceOptions& o, std::ostream& out) {
  if (o.builder != "circle")
    throw UsageError("convergence needs a continuous-type builder (circle); '" + o.builder + "' is not one");
  const std::vector<int> nodes = parse_int_list(o.schedule);
  if (nodes.empty()) throw UsageError("empty node schedule");
  std::ostringstream csv;
  csv << std::setprecision(17);
  csv << "nodes,entropy,coherence,parseval_defect\n";
  const Vector h = (Vector(2) << std::cos(o.angle), std::sin(o.angle)).finished();
  for (int n : nodes) {
    if (n < 2) throw UsageError("schedule entries must be >= 2");
    const FrameFamily f = make_circle_frame(static_cast<std::size_t>(n));
    const FrameFamily g = make_circle_frame(static_cast<std::size_t>(n), o.offset);
    csv << n << ',' << shannon_entropy(f, h, false).value << ',' << coherence(f, g) << ',' << parseval_defect(f)
        << '\n';
  }
  emit(csv.str(), o.output, out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"entroframe: entropic uncertainty laboratory for continuous Parseval frames"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "build a frame and write it as JSON");
  gen_cmd->add_option("--builder", gen.builder, "onb|fourier|circle|mercedes|random-parseval|coordinate-pframe|split-pframe")
      ->required();
  gen_cmd->add_option("--dim", gen.dim);
  gen_cmd->add_option("--atoms", gen.atoms);
  gen_cmd->add_option("--nodes", gen.nodes);
  gen_cmd->add_option("--offset", gen.offset);
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--field", gen.field, "R or C");
  gen_cmd->add_option("--p", gen.p);
  gen_cmd->add_option("--role", gen.role, "functionals or vectors");
  gen_cmd->add_option("--splits", gen.splits, "comma-separated copies per coordinate");
  gen_cmd->add_option("--lambda", gen.lambda);
  gen_cmd->add_option("-o,--output", gen.output);

  VerifyOptions ver;
  auto* ver_cmd = app.add_subcommand("verify", "certify the entropic bounds on sampled inputs");
  ver_cmd->add_option("frame_a", ver.frame_a)->required();
  ver_cmd->add_option("frame_b", ver.frame_b)->required();
  ver_cmd->add_option("--samples", ver.samples)->capture_default_str();
  ver_cmd->add_option("--seed", ver.seed)->capture_default_str();
  ver_cmd->add_option("--tol", ver.tol)->capture_default_str();
  ver_cmd->add_option("--p", ver.p, "p-frame mode exponent");
  ver_cmd->add_option("-o,--output", ver.output);
  ver.opt.add(ver_cmd);

  ProbeOptions pro;
  auto* pro_cmd = app.add_subcommand("probe", "search for entropy-sum minimizers and compare with the Kraus bound");
  pro_cmd->add_option("frame_a", pro.frame_a)->required();
  pro_cmd->add_option("frame_b", pro.frame_b)->required();
  pro_cmd->add_option("--seed", pro.seed)->capture_default_str();
  pro_cmd->add_option("-o,--output", pro.output);
  pro_cmd->add_option("--trace-csv", pro.trace_csv, "per-restart minima");
  pro.opt.add(pro_cmd);

  ConvergenceOptions conv;
  auto* conv_cmd = app.add_subcommand("convergence", "entropy and coherence against grid resolution");
  conv_cmd->add_option("--builder", conv.builder)->capture_default_str();
  conv_cmd->add_option("--schedule", conv.schedule)->capture_default_str();
  conv_cmd->add_option("--angle", conv.angle, "direction of the test vector");
  conv_cmd->add_option("--offset", conv.offset, "rotation of the partner frame");
  conv_cmd->add_option("-o,--output", conv.output);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen, out);
    if (*ver_cmd) return cmd_verify(ver, out);
    if (*pro_cmd) return cmd_probe(pro, out);
    if (*conv_cmd) return cmd_convergence(conv, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace entroframe::cli
