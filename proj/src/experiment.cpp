#include "rsbl/experiment.hpp"

#include "rsbl/diagnostics.hpp"
#include "rsbl/image_io.hpp"
#include "rsbl/signals.hpp"
#include "rsbl/uq.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace rsbl {

namespace {

using nlohmann::json;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

template <typename T>
T get(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + ": bad value for '" + key + "': " + e.what());
  }
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback, const std::string& where) {
  return obj.contains(key) ? get<T>(obj, key, where) : fallback;
}

double parse_snr(const json& v, const std::string& where) {
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    throw ConfigError(where + ": snr_db must be a number or \"inf\"");
  }
  if (!v.is_number()) throw ConfigError(where + ": snr_db must be a number or \"inf\"");
  return v.get<double>();
}

ModelSpec parse_model(const json& j, const std::string& where) {
  reject_unknown(j, {"kind", "gamma", "ratio", "mask_seed", "snr_db", "noise_seed"}, where);
  ModelSpec m;
  m.kind = parse_model_kind(get<std::string>(j, "kind", where));
  if (!j.contains("snr_db")) throw ConfigError(where + ": missing 'snr_db'");
  m.snr_db = parse_snr(j.at("snr_db"), where);
  m.noise_seed = get<std::uint64_t>(j, "noise_seed", where);
  switch (m.kind) {
    case ModelKind::identity: break;
    case ModelKind::blur:
      m.gamma = get<double>(j, "gamma", where);
      if (!(m.gamma > 0.0)) throw ConfigError(where + ": gamma must be positive");
      break;
    case ModelKind::subsample:
    case ModelKind::partial_fourier:
      m.ratio = get<double>(j, "ratio", where);
      m.mask_seed = get<std::uint64_t>(j, "mask_seed", where);
      if (!(m.ratio >= 0.0 && m.ratio < 1.0)) throw ConfigError(where + ": ratio must be in [0, 1)");
      break;
  }
  return m;
}

PriorSpec parse_prior(const json& j, const std::string& where) {
  reject_unknown(j, {"kind", "p", "zeta", "vartheta"}, where);
  PriorSpec p;
  p.kind = parse_transform_kind(get<std::string>(j, "kind", where));
  p.p = get_or<int>(j, "p", 0, where);
  p.zeta = get_or<double>(j, "zeta", 0.25, where);
  p.vartheta = get<double>(j, "vartheta", where);
  if (p.p < 0) throw ConfigError(where + ": p must be >= 0");
  if (!(p.zeta >= 0.0 && p.zeta < 1.0)) throw ConfigError(where + ": zeta must be in [0, 1)");
  if (!(p.vartheta > 0.0)) throw ConfigError(where + ": vartheta must be positive");
  return p;
}

GammaConvention parse_convention(const std::string& s) {
  if (s == "scale") return GammaConvention::scale;
  if (s == "rate") return GammaConvention::rate;
  throw ConfigError("hyper: vartheta_convention must be 'scale' or 'rate'");
}

std::string signal_key(const ExperimentConfig& c, std::size_t i) {
  return c.image_file ? std::string("image") : c.signals[i];
}

std::unique_ptr<LinearOperator> make_prior(const PriorSpec& spec, int n, int dims) {
  PriorTransform base = make_transform(spec.kind, n, spec.p, spec.zeta);
  if (dims == 1) return std::make_unique<PriorTransform>(std::move(base));
  return std::make_unique<SeparableTransform2D>(std::move(base));
}

Eigen::VectorXd make_truth(const ExperimentConfig& c, std::size_t i) {
  if (c.image_file) return load_image(*c.image_file, c.n, c.crop);
  if (c.dims == 1) return sample_example(parse_signal_id(c.signals[i]), make_grid(c.n)).values;
  return sample_image(parse_image_id(c.signals[i]), c.n).values;
}

void write_csv_header_precision(std::ostream& out) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_estimate_csv(const std::filesystem::path& path, const ExperimentConfig& c, const Eigen::VectorXd& truth,
                        const Eigen::VectorXd& est, const ErrorReport& err) {
  std::ofstream out = open_out(path);
  write_csv_header_precision(out);
  const Grid grid = make_grid(c.n);
  if (c.dims == 1) {
    out << "s,truth,map,abs_err\n";
    for (int j = 0; j < c.n; ++j)
      out << grid[j] << ',' << truth[j] << ',' << est[j] << ',' << err.pointwise[j] << '\n';
    return;
  }
  out << "s1,s2,truth,map,abs_err\n";
  for (int jp = 0; jp < c.n; ++jp)
    for (int j = 0; j < c.n; ++j) {
      const int k = j + c.n * jp;
      out << grid[j] << ',' << grid[jp] << ',' << truth[k] << ',' << est[k] << ',' << err.pointwise[k] << '\n';
    }
}

void write_data_csv(const std::filesystem::path& path, const Measurement& m) {
  std::ofstream out = open_out(path);
  write_csv_header_precision(out);
  if (m.model.is_complex()) {
    const Eigen::VectorXcd y = m.complex_data();
    out << "index,real,imag\n";
    for (Eigen::Index i = 0; i < y.size(); ++i)
      out << m.model.mask()[static_cast<std::size_t>(i)] << ',' << y[i].real() << ',' << y[i].imag() << '\n';
    return;
  }
  out << "index,value\n";
  const auto& mask = m.model.mask();
  for (Eigen::Index i = 0; i < m.data.size(); ++i)
    out << (mask.empty() ? static_cast<int>(i) : mask[static_cast<std::size_t>(i)]) << ',' << m.data[i] << '\n';
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  const std::string where = "config";
  reject_unknown(j, {"name", "dims", "n", "signals", "image_file", "crop", "measurements", "pairing", "priors",
                     "hyper", "modes", "replicates", "uq"},
                 where);
  ExperimentConfig c;
  c.name = get_or<std::string>(j, "name", c.name, where);
  c.dims = get_or<int>(j, "dims", 1, where);
  if (c.dims != 1 && c.dims != 2) throw ConfigError("config: dims must be 1 or 2");
  c.n = get<int>(j, "n", where);
  if (c.n < 4 || c.n % 2 != 0) throw ConfigError("config: n must be even and >= 4");

  if (j.contains("image_file")) {
    if (c.dims != 2) throw ConfigError("config: image_file requires dims = 2");
    if (j.contains("signals")) throw ConfigError("config: give either signals or image_file");
    c.image_file = get<std::string>(j, "image_file", where);
    c.crop = get_or<bool>(j, "crop", false, where);
    c.signals = {"image"};
  } else {
    c.signals = get<std::vector<std::string>>(j, "signals", where);
    if (c.signals.empty()) throw ConfigError("config: no signals");
    for (const auto& s : c.signals) {
      if (c.dims == 1)
        parse_signal_id(s);
      else
        parse_image_id(s);
    }
  }

  const json& ms = j.contains("measurements") ? j.at("measurements") : json();
  if (!ms.is_array() || ms.empty()) throw ConfigError("config: measurements must be a non-empty array");
  for (std::size_t i = 0; i < ms.size(); ++i)
    c.measurements.push_back(parse_model(ms[i], "measurements[" + std::to_string(i) + "]"));

  const std::string pairing = get_or<std::string>(j, "pairing", "per_signal", where);
  if (pairing == "per_signal")
    c.pairing = Pairing::per_signal;
  else if (pairing == "all")
    c.pairing = Pairing::all;
  else
    throw ConfigError("config: pairing must be 'per_signal' or 'all'");
  if (c.pairing == Pairing::per_signal && c.measurements.size() != c.signals.size())
    throw ConfigError("config: per_signal pairing needs one measurement per signal");

  const json& ps = j.contains("priors") ? j.at("priors") : json();
  if (!ps.is_array() || ps.empty()) throw ConfigError("config: priors must be a non-empty array");
  std::set<TransformKind> seen;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    c.priors.push_back(parse_prior(ps[i], "priors[" + std::to_string(i) + "]"));
    if (!seen.insert(c.priors.back().kind).second) throw ConfigError("config: duplicate prior kind");
  }

  c.hyper.convention = GammaConvention::rate;
  if (j.contains("hyper")) {
    const json& h = j.at("hyper");
    reject_unknown(h, {"beta", "vartheta_convention", "max_outer_iters", "x_tol", "cg_tol", "cg_max_iters"}, "hyper");
    c.hyper.beta = get_or<double>(h, "beta", c.hyper.beta, "hyper");
    c.hyper.convention = parse_convention(get_or<std::string>(h, "vartheta_convention", "rate", "hyper"));
    c.hyper.max_outer_iters = get_or<int>(h, "max_outer_iters", c.hyper.max_outer_iters, "hyper");
    c.hyper.x_tol = get_or<double>(h, "x_tol", c.hyper.x_tol, "hyper");
    c.hyper.cg_tol = get_or<double>(h, "cg_tol", c.hyper.cg_tol, "hyper");
    c.hyper.cg_max_iters = get_or<int>(h, "cg_max_iters", c.hyper.cg_max_iters, "hyper");
  }
  c.hyper.vartheta = c.priors.front().vartheta;
  try {
    c.hyper.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("hyper: ") + e.what());
  }

  if (j.contains("modes")) {
    const auto modes = get<std::vector<std::string>>(j, "modes", where);
    c.separate = c.joint = false;
    for (const auto& m : modes) {
      if (m == "separate")
        c.separate = true;
      else if (m == "joint")
        c.joint = true;
      else
        throw ConfigError("config: unknown mode '" + m + "'");
    }
    if (!c.separate && !c.joint) throw ConfigError("config: no modes");
  }
  c.replicates = get_or<int>(j, "replicates", 1, where);
  if (c.replicates < 1) throw ConfigError("config: replicates must be >= 1");

  if (j.contains("uq")) {
    const json& u = j.at("uq");
    reject_unknown(u, {"enabled", "level", "samples", "seed"}, "uq");
    c.uq.enabled = get_or<bool>(u, "enabled", false, "uq");
    c.uq.level = get_or<double>(u, "level", c.uq.level, "uq");
    c.uq.samples = get_or<int>(u, "samples", 0, "uq");
    if (!(c.uq.level > 0.0 && c.uq.level < 1.0)) throw ConfigError("uq: level must be in (0, 1)");
    if (c.uq.samples < 0) throw ConfigError("uq: samples must be >= 0");
    if (c.uq.samples > 0) c.uq.seed = get<std::uint64_t>(u, "seed", "uq");
    if (c.uq.enabled && c.dims == 2 && c.n > 64) throw ConfigError("uq: 2D uncertainty limited to n <= 64");
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  ExperimentConfig c = parse_config(ss.str());
  if (c.image_file && c.image_file->is_relative()) c.image_file = path.parent_path() / *c.image_file;
  return c;
}

namespace {

const char* kSingle = R"({
  "name": "single_f123", "dims": 1, "n": 128,
  "signals": ["f1", "f2", "f3"],
  "measurements": [
    {"kind": "identity", "snr_db": 5, "noise_seed": 100},
    {"kind": "blur", "gamma": 0.03, "snr_db": 20, "noise_seed": 200},
    {"kind": "subsample", "ratio": 0.3, "mask_seed": 1000, "snr_db": 20, "noise_seed": 300}
  ],
  "pairing": "per_signal",
  "priors": [
    {"kind": "local", "p": 0, "vartheta": 1e-4},
    {"kind": "residual", "p": 0, "zeta": 0.25, "vartheta": 1e-4}
  ],
  "hyper": {"beta": 1, "vartheta_convention": "rate"},
  "modes": ["separate"],
  "replicates": 10
})";

const char* kJoint = R"({
  "name": "joint_f3", "dims": 1, "n": 128,
  "signals": ["f3"],
  "measurements": [
    {"kind": "identity", "snr_db": 5, "noise_seed": 100},
    {"kind": "blur", "gamma": 0.03, "snr_db": 20, "noise_seed": 200},
    {"kind": "subsample", "ratio": 0.3, "mask_seed": 1000, "snr_db": 20, "noise_seed": 300}
  ],
  "pairing": "all",
  "priors": [
    {"kind": "local", "p": 0, "vartheta": 1e-4},
    {"kind": "residual", "p": 0, "zeta": 0.25, "vartheta": 1e-4}
  ],
  "hyper": {"beta": 1, "vartheta_convention": "rate"},
  "modes": ["separate", "joint"],
  "replicates": 10
})";

const char* kImages = R"({
  "name": "images_h123", "dims": 2, "n": 64,
  "signals": ["h1", "h2", "h3"],
  "measurements": [
    {"kind": "subsample", "ratio": 0.3, "mask_seed": 2000, "snr_db": 5, "noise_seed": 400},
    {"kind": "blur", "gamma": 0.01, "snr_db": 5, "noise_seed": 500},
    {"kind": "partial_fourier", "ratio": 0.7, "mask_seed": 3000, "snr_db": 5, "noise_seed": 600}
  ],
  "pairing": "per_signal",
  "priors": [
    {"kind": "local", "p": 0, "vartheta": 1e-2},
    {"kind": "residual", "p": 0, "zeta": 0.25, "vartheta": 1e-3}
  ],
  "hyper": {"beta": 1, "vartheta_convention": "rate"},
  "modes": ["separate"],
  "replicates": 5
})";

}  // namespace

ExperimentConfig bundled_suite(const std::string& name) {
  if (name == "single_f123") return parse_config(kSingle);
  if (name == "single_f456") {
    ExperimentConfig c = parse_config(kSingle);
    c.name = "single_f456";
    c.signals = {"f4", "f5", "f6"};
    return c;
  }
  if (name == "joint_f3") return parse_config(kJoint);
  if (name == "images_h123") return parse_config(kImages);
  throw std::invalid_argument("unknown suite: " + name);
}

std::string prior_label(const PriorSpec& prior) { return to_string(prior.kind); }

LinearForwardModel make_model(const ModelSpec& spec, int n, int dims, int replicate) {
  const std::uint64_t mask_seed = spec.mask_seed + static_cast<std::uint64_t>(replicate);
  switch (spec.kind) {
    case ModelKind::identity: return LinearForwardModel::identity(n, dims);
    case ModelKind::blur: return LinearForwardModel::blur(n, spec.gamma, dims);
    case ModelKind::subsample: return LinearForwardModel::subsample(n, spec.ratio, mask_seed, dims);
    case ModelKind::partial_fourier: return LinearForwardModel::partial_fourier(n, spec.ratio, mask_seed, dims);
  }
  throw std::invalid_argument("unknown model kind");
}

double ExperimentResult::average(const std::string& signal, TransformKind prior, const std::string& mode) const {
  double sum = 0.0;
  int count = 0;
  for (const auto& c : cells)
    if (c.signal == signal && c.prior.kind == prior && c.mode == mode) {
      sum += c.mean_abs;
      ++count;
    }
  return count ? sum / count : std::numeric_limits<double>::quiet_NaN();
}

namespace {

struct CellJob {
  std::size_t signal = 0;
  int replicate = 0;
  std::size_t prior = 0;
  std::string mode;
};

struct CellOutput {
  CellResult cell;
  std::vector<CredibleBand> bands;
  std::vector<Eigen::MatrixXd> draws;
  std::exception_ptr error;
};

// Runs fn(i) for i in [0, count) on up to hardware_concurrency threads.
template <typename Fn>
void parallel_for(std::size_t count, Fn fn) {
  const std::size_t workers =
      std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next++; i < count; i = next++) fn(i);
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, const std::optional<std::filesystem::path>& out_dir,
                                std::ostream* log) {
  ExperimentResult result;
  result.config = config;
  const bool write = out_dir.has_value() && config.write_files;
  if (write) std::filesystem::create_directories(*out_dir);

  std::vector<std::string> modes;
  if (config.separate) modes.push_back("separate");
  if (config.joint) modes.push_back("joint");

  // Truths and measurement sets are cheap and built up front; cells then run independently.
  const std::size_t signal_count = config.signals.size();
  std::vector<Eigen::VectorXd> truths(signal_count);
  std::vector<std::vector<MeasurementSet>> data(signal_count);
  std::vector<CellJob> jobs;
  for (std::size_t si = 0; si < signal_count; ++si) {
    truths[si] = make_truth(config, si);
    std::vector<std::size_t> members;
    if (config.pairing == Pairing::per_signal)
      members = {si};
    else
      for (std::size_t m = 0; m < config.measurements.size(); ++m) members.push_back(m);
    for (int rep = 0; rep < config.replicates; ++rep) {
      MeasurementSet set;
      for (std::size_t m : members) {
        const ModelSpec& spec = config.measurements[m];
        set.measurements.push_back(acquire(truths[si], make_model(spec, config.n, config.dims, rep), spec.snr_db,
                                           spec.noise_seed + static_cast<std::uint64_t>(rep)));
      }
      data[si].push_back(std::move(set));
      for (std::size_t pi = 0; pi < config.priors.size(); ++pi)
        for (const std::string& mode : modes) jobs.push_back({si, rep, pi, mode});
    }
  }

  std::vector<CellOutput> outputs(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    const CellJob& job = jobs[i];
    CellOutput& out = outputs[i];
    try {
      const PriorSpec& prior = config.priors[job.prior];
      const MeasurementSet& set = data[job.signal][static_cast<std::size_t>(job.replicate)];
      const auto transform = make_prior(prior, config.n, config.dims);
      HyperParams hyper = config.hyper;
      hyper.vartheta = prior.vartheta;
      CellResult& cell = out.cell;
      cell.signal = signal_key(config, job.signal);
      cell.prior = prior;
      cell.mode = job.mode;
      cell.replicate = job.replicate;
      cell.truth = truths[job.signal];
      cell.posterior = job.mode == "joint" ? mmv_gsbl_run(set, *transform, hyper)
                                           : gsbl_run_separate(set, *transform, hyper);
      double total = 0.0;
      for (std::size_t l = 0; l < set.measurements.size(); ++l) {
        const Eigen::VectorXd& est = cell.posterior.x_map[l];
        const double err = error_report(est, cell.truth).mean_abs;
        cell.member_mean_abs.push_back(err);
        cell.estimates.push_back(est);
        total += err;
        if (write && config.uq.enabled) {
          const Eigen::VectorXd& theta = cell.posterior.theta_map[job.mode == "joint" ? 0 : l];
          const ConditionalPosterior post(set.measurements[l], *transform, theta);
          out.bands.push_back(credible_band(post, config.uq.level));
          if (config.uq.samples > 0) out.draws.push_back(post.sample(config.uq.samples, config.uq.seed));
        }
      }
      cell.mean_abs = total / static_cast<double>(set.measurements.size());
    } catch (...) {
      out.error = std::current_exception();
    }
  });
  for (const auto& out : outputs)
    if (out.error) std::rethrow_exception(out.error);

  // Single ordered writer.
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const CellJob& job = jobs[i];
    CellOutput& out = outputs[i];
    const CellResult& cell = out.cell;
    const std::string rep_tag = "r" + std::to_string(job.replicate);
    if (write) {
      const std::filesystem::path sig_dir = *out_dir / cell.signal;
      std::filesystem::create_directories(sig_dir);
      const MeasurementSet& set = data[job.signal][static_cast<std::size_t>(job.replicate)];
      const bool first_cell_of_rep = job.prior == 0 && job.mode == modes.front();
      if (first_cell_of_rep)
        for (std::size_t l = 0; l < set.measurements.size(); ++l)
          write_data_csv(sig_dir / ("data_" + rep_tag + "_m" + std::to_string(l) + ".csv"), set.measurements[l]);
      const std::string stem = prior_label(cell.prior) + "_" + cell.mode + "_" + rep_tag;
      for (std::size_t l = 0; l < cell.estimates.size(); ++l) {
        const std::string member_stem = stem + "_m" + std::to_string(l);
        const Eigen::VectorXd& est = cell.estimates[l];
        write_estimate_csv(sig_dir / (member_stem + ".csv"), config, cell.truth, est, error_report(est, cell.truth));
        if (config.dims == 2) save_pgm(sig_dir / (member_stem + ".pgm"), render_field(est, config.n));
        if (l < out.bands.size()) {
          std::ofstream band_out = open_out(sig_dir / (member_stem + "_band.csv"));
          write_band_csv(band_out, out.bands[l]);
        }
        if (l < out.draws.size()) {
          std::ofstream s_out = open_out(sig_dir / (member_stem + "_samples.csv"));
          write_matrix_csv(s_out, out.draws[l].transpose());
        }
      }
      std::ofstream trace_out = open_out(sig_dir / (stem + "_trace.csv"));
      write_trace_csv(trace_out, cell.posterior.trace);
      const bool last_job_of_signal = i + 1 == jobs.size() || jobs[i + 1].signal != job.signal;
      if (last_job_of_signal) {
        std::ofstream truth_out = open_out(sig_dir / "truth.csv");
        write_csv_header_precision(truth_out);
        truth_out << "index,value\n";
        for (Eigen::Index k = 0; k < cell.truth.size(); ++k) truth_out << k << ',' << cell.truth[k] << '\n';
        if (config.dims == 2) save_pgm(sig_dir / "truth.pgm", render_field(cell.truth, config.n));
      }
    }
    if (log)
      *log << cell.signal << ' ' << prior_label(cell.prior) << ' ' << cell.mode << ' ' << rep_tag
           << " mean_abs=" << cell.mean_abs << " iters=" << cell.posterior.iters
           << (cell.posterior.converged ? "" : " (not converged)") << '\n';
    result.cells.push_back(std::move(out.cell));
  }
  if (write) {
    std::ofstream summary = open_out(*out_dir / "summary.txt");
    write_summary(summary, result);
  }
  return result;
}

void write_summary(std::ostream& out, const ExperimentResult& result) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "name=" << result.config.name << '\n';
  std::map<std::string, std::pair<double, int>> totals;
  std::vector<std::string> order;
  for (const auto& c : result.cells) {
    const std::string key = c.signal + '.' + prior_label(c.prior) + '.' + c.mode;
    out << "mean_abs." << key << ".r" << c.replicate << '=' << c.mean_abs << '\n';
    out << "iters." << key << ".r" << c.replicate << '=' << c.posterior.iters << '\n';
    out << "converged." << key << ".r" << c.replicate << '=' << (c.posterior.converged ? 1 : 0) << '\n';
    if (!totals.count(key)) order.push_back(key);
    totals[key].first += c.mean_abs;
    totals[key].second += 1;
  }
  for (const auto& key : order)
    out << "mean_abs." << key << '=' << totals[key].first / totals[key].second << '\n';
}

}  // namespace rsbl
