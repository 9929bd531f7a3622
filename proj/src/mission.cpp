#include "aerolex/mission.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "aerolex/errors.hpp"
#include "aerolex/grid.hpp"
#include "aerolex/parallel.hpp"

namespace aerolex::mission {

ClearanceReport clearance_from_probabilities(std::vector<double> probabilities, double threshold) {
  if (probabilities.empty()) throw InputError("clearance needs at least one waypoint");
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw InputError("clearance threshold must lie in [0, 1]");
  }
  for (double p : probabilities) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("waypoint probability outside [0, 1]");
  }
  ClearanceReport r;
  r.threshold = threshold;
  r.score = std::accumulate(probabilities.begin(), probabilities.end(), 0.0) /
            static_cast<double>(probabilities.size());
  r.score = std::clamp(r.score, 0.0, 1.0);
  r.granted = r.score > threshold;
  r.probabilities = std::move(probabilities);
  return r;
}

ClearanceReport clearance(const Waypoints& path, const ProbabilityAt& prob_at, double threshold) {
  if (path.empty()) throw InputError("clearance needs at least one waypoint");
  std::vector<double> probs(path.size());
  parallel_for(path.size(), [&](std::size_t i) { probs[i] = prob_at(path[i]); });
  return clearance_from_probabilities(std::move(probs), threshold);
}

ProbabilityMemo::ProbabilityMemo(const cola::Constitution& c, const starmap::StarMap& sm,
                                 inference::InferenceOptions options)
    : c_(c), sm_(sm), options_(options) {}

double ProbabilityMemo::operator()(const MissionSetting& setting, Vec3 p) {
  Key key{inference::to_string(setting), p.x, p.y, p.z};
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  const double v = inference::query_probability(c_, sm_, p, setting, {}, options_);
  std::lock_guard lock(mutex_);
  cache_.emplace(std::move(key), v);
  return v;
}

std::size_t ProbabilityMemo::size() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

std::string group_label(const cola::ParameterGroup& g) {
  std::string out;
  for (const auto& o : g.options) out += (out.empty() ? "" : "/") + o;
  return out;
}

std::vector<MissionSetting> enumerate_settings(const cola::Constitution& c,
                                               const AllowedOptions& allowed, std::size_t limit) {
  std::vector<std::vector<std::string>> options;
  for (const auto& g : c.parameter_groups) options.push_back(g.options);
  std::vector<std::vector<std::string>> kept(options.size());
  for (const auto& o : allowed) {
    const int g = c.group_of(o);
    if (g < 0) throw InputError("'" + o + "' is not a declared parameter option");
    auto& k = kept[static_cast<std::size_t>(g)];
    if (std::find(k.begin(), k.end(), o) == k.end()) k.push_back(o);
  }
  for (std::size_t g = 0; g < options.size(); ++g) {
    if (kept[g].empty()) continue;
    std::vector<std::string> ordered;
    for (const auto& o : options[g]) {
      if (std::find(kept[g].begin(), kept[g].end(), o) != kept[g].end()) ordered.push_back(o);
    }
    options[g] = std::move(ordered);
  }
  std::size_t total = 1;
  for (const auto& o : options) {
    if (o.empty()) throw InputError("parameter group without options");
    if (total > limit / o.size() + 1) throw ResourceError("setting space exceeds the limit");
    total *= o.size();
  }
  if (total > limit) {
    throw ResourceError("setting space has " + std::to_string(total) + " settings, limit is " +
                        std::to_string(limit));
  }
  std::vector<MissionSetting> out;
  out.reserve(total);
  std::vector<std::size_t> digits(options.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    MissionSetting s;
    for (std::size_t g = 0; g < options.size(); ++g) s.choices.push_back(options[g][digits[g]]);
    out.push_back(std::move(s));
    for (std::size_t g = options.size(); g-- > 0;) {
      if (++digits[g] < options[g].size()) break;
      digits[g] = 0;
    }
  }
  return out;
}

ExplanationReport explain_with(const cola::Constitution& c, const SettingScorer& score,
                               const ExplainOptions& options) {
  const auto settings = enumerate_settings(c, options.allowed, options.max_settings);
  ExplanationReport report;
  report.threshold = options.threshold;
  for (const auto& g : c.parameter_groups) report.groups.push_back(group_label(g));
  std::vector<SettingScore> scored(settings.size());
  for (std::size_t i = 0; i < settings.size(); ++i) {
    scored[i].setting = settings[i];
    scored[i].score = score(settings[i]);
    scored[i].granted = scored[i].score > options.threshold;
  }
  if (!c.parameter_groups.empty()) {
    for (std::size_t g = 0; g < c.parameter_groups.size(); ++g) {
      double impact = 0.0;
      for (std::size_t a = 0; a < scored.size(); ++a) {
        for (std::size_t b = a + 1; b < scored.size(); ++b) {
          bool only_g = scored[a].setting.choices[g] != scored[b].setting.choices[g];
          for (std::size_t h = 0; h < c.parameter_groups.size() && only_g; ++h) {
            if (h != g && scored[a].setting.choices[h] != scored[b].setting.choices[h]) {
              only_g = false;
            }
          }
          if (only_g) impact = std::max(impact, std::abs(scored[a].score - scored[b].score));
        }
      }
      report.impacts.push_back({report.groups[g], impact});
    }
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const SettingScore& a, const SettingScore& b) { return a.score > b.score; });
  report.scores = std::move(scored);
  return report;
}

namespace {

SettingScorer path_scorer(ProbabilityMemo& memo, const Waypoints& path, double threshold) {
  if (path.empty()) throw InputError("clearance needs at least one waypoint");
  return [&memo, &path, threshold](const MissionSetting& s) {
    return clearance(path, [&](Vec3 p) { return memo(s, p); }, threshold).score;
  };
}

}  // namespace

ExplanationReport explain(const cola::Constitution& c, ProbabilityMemo& memo,
                          const Waypoints& path, const ExplainOptions& options) {
  return explain_with(c, path_scorer(memo, path, options.threshold), options);
}

ExplanationReport explain(const cola::Constitution& c, const starmap::StarMap& sm,
                          const Waypoints& path, const ExplainOptions& options) {
  ProbabilityMemo memo(c, sm, options.inference);
  return explain(c, memo, path, options);
}

OptimizationResult optimize_setting_with(const cola::Constitution& c, const SettingScorer& score,
                                         const ExplainOptions& options) {
  const auto settings = enumerate_settings(c, options.allowed, options.max_settings);
  OptimizationResult best;
  bool first = true;
  for (const auto& s : settings) {
    const double v = score(s);
    if (first || v > best.score) {
      best = {s, v};
      first = false;
    }
  }
  return best;
}

OptimizationResult optimize_setting(const cola::Constitution& c, const starmap::StarMap& sm,
                                    const Waypoints& path, const ExplainOptions& options) {
  ProbabilityMemo memo(c, sm, options.inference);
  return optimize_setting_with(c, path_scorer(memo, path, options.threshold), options);
}

RejectionCurve rejection_area(const std::vector<double>& scores, std::size_t samples) {
  if (scores.empty()) throw InputError("rejection curve needs at least one score");
  if (samples < 2) throw InputError("rejection curve needs at least two thresholds");
  std::vector<double> sorted = scores;
  std::sort(sorted.begin(), sorted.end());
  RejectionCurve curve;
  const double n = static_cast<double>(sorted.size());
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(samples - 1);
    const auto below = std::lower_bound(sorted.begin(), sorted.end(), t) - sorted.begin();
    curve.thresholds.push_back(t);
    curve.rates.push_back(static_cast<double>(below) / n);
  }
  for (std::size_t k = 1; k < samples; ++k) {
    curve.area += 0.5 * (curve.rates[k - 1] + curve.rates[k]) *
                  (curve.thresholds[k] - curve.thresholds[k - 1]);
  }
  return curve;
}

std::string explanation_table(const ExplanationReport& report) {
  std::vector<std::size_t> width;
  for (std::size_t g = 0; g < report.groups.size(); ++g) {
    std::size_t w = report.groups[g].size();
    for (const auto& s : report.scores) w = std::max(w, s.setting.choices[g].size());
    width.push_back(w);
  }
  std::ostringstream out;
  out << std::left;
  for (std::size_t g = 0; g < report.groups.size(); ++g) {
    out << std::setw(static_cast<int>(width[g])) << report.groups[g] << "  ";
  }
  out << "clearance  granted\n";
  for (const auto& s : report.scores) {
    for (std::size_t g = 0; g < report.groups.size(); ++g) {
      out << std::setw(static_cast<int>(width[g])) << s.setting.choices[g] << "  ";
    }
    out << std::fixed << std::setprecision(6) << std::setw(9) << s.score << "  "
        << (s.granted ? "yes" : "no") << "\n";
  }
  if (!report.impacts.empty()) {
    out << "\nimpact per group\n";
    for (const auto& i : report.impacts) {
      out << "  " << i.group << ": " << std::fixed << std::setprecision(6) << i.impact << "\n";
    }
  }
  return out.str();
}

std::string explanation_csv(const ExplanationReport& report) {
  std::ostringstream out;
  for (const auto& g : report.groups) out << g << ",";
  out << "score,granted\n";
  for (const auto& s : report.scores) {
    for (const auto& c : s.setting.choices) out << c << ",";
    out << format_double(s.score) << "," << (s.granted ? 1 : 0) << "\n";
  }
  return out.str();
}

std::string rejection_csv(const RejectionCurve& curve) {
  std::ostringstream out;
  out << "threshold,rejection_rate\n";
  for (std::size_t k = 0; k < curve.thresholds.size(); ++k) {
    out << format_double(curve.thresholds[k]) << "," << format_double(curve.rates[k]) << "\n";
  }
  return out.str();
}

RejectionCurve read_rejection_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("threshold,", 0) != 0) {
    throw InputError("rejection CSV lacks its header");
  }
  RejectionCurve curve;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument("missing comma");
      curve.thresholds.push_back(std::stod(line.substr(0, comma)));
      curve.rates.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw InputError("rejection CSV row " + std::to_string(row) + " is malformed");
    }
  }
  for (std::size_t k = 1; k < curve.thresholds.size(); ++k) {
    curve.area += 0.5 * (curve.rates[k - 1] + curve.rates[k]) *
                  (curve.thresholds[k] - curve.thresholds[k - 1]);
  }
  return curve;
}

}  // namespace aerolex::mission
