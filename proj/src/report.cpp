#include "cospec/report.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace cospec {

namespace {

Rational entry_to_rational(const Json& v, bool& exact) {
  if (v.is_string()) return rational_from_string(v.get<std::string>());
  exact = false;
  return rational_reconstruct(v.get<double>(), 1000000000UL);
}

}  // namespace

SpecFile parse_spec_json(const Json& j) {
  if (j.contains("schema") && j.at("schema").get<std::string>() != kSpecSchema)
    throw std::invalid_argument("spec file: unknown schema");
  const Json& mats = j.at("matrices");
  int alphabet = static_cast<int>(mats.size());
  if (alphabet == 0) throw std::invalid_argument("spec file: no matrices");
  int dim = static_cast<int>(mats.at(0).size());

  bool exact = true;
  std::vector<QMat> qmats;
  for (const Json& m : mats) {
    QMat q(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int jx = 0; jx < dim; ++jx) q(i, jx) = entry_to_rational(m.at(i).at(jx), exact);
    qmats.push_back(std::move(q));
  }

  MarkovMeasure measure = MarkovMeasure::bernoulli(std::vector<double>(alphabet, 1.0 / alphabet));
  if (j.contains("measure")) {
    const Json& jm = j.at("measure");
    if (jm.contains("bernoulli")) {
      measure = MarkovMeasure::bernoulli(jm.at("bernoulli").get<std::vector<double>>());
    } else {
      RMat t(alphabet, alphabet);
      for (int i = 0; i < alphabet; ++i)
        for (int k = 0; k < alphabet; ++k) t(i, k) = jm.at("transition").at(i).at(k).get<double>();
      if (jm.contains("stationary")) {
        measure = MarkovMeasure(t, jm.at("stationary").get<std::vector<double>>());
      } else {
        measure = MarkovMeasure::from_transition(t);
      }
    }
  }

  SpecFile out{exact ? CocycleSpec(std::move(qmats), std::move(measure))
                     : [&] {
                         std::vector<CMat> cmats;
                         for (const QMat& q : qmats) cmats.push_back(to_complex(q));
                         return CocycleSpec(std::move(cmats), std::move(measure));
                       }()};
  if (j.contains("metric_theta")) out.spec.set_metric_theta(j.at("metric_theta").get<double>());
  if (j.contains("perturbation")) {
    const Json& jp = j.at("perturbation");
    HolderPerturbation p;
    p.amplitude = jp.at("amplitude").get<double>();
    p.nu = jp.value("nu", 1.0);
    p.max_depth = jp.value("max_depth", 40);
    p.salt = jp.value("salt", 0ULL);
    out.spec.set_perturbation(p);
  }
  if (j.contains("periodic_point"))
    out.periodic_word = j.at("periodic_point").get<std::vector<int>>();
  if (j.contains("homoclinic_point")) {
    const Json& jh = j.at("homoclinic_point");
    std::vector<int> insert = jh.at("insert").get<std::vector<int>>();
    long l = jh.contains("l") ? jh.at("l").get<long>() : 0;
    // an eventually periodic point given with a pre-period is normalized by
    // shifting the deviation into non-negative coordinates
    if (jh.contains("pre_period")) {
      std::vector<int> pre = jh.at("pre_period").get<std::vector<int>>();
      l += static_cast<long>(pre.size());
      pre.insert(pre.end(), insert.begin(), insert.end());
      insert = std::move(pre);
    }
    if (l == 0 && out.periodic_word) {
      long q = static_cast<long>(out.periodic_word->size());
      long len = static_cast<long>(insert.size());
      l = ((len + q - 1) / q) * q;
    }
    if (out.periodic_word) {
      long q = static_cast<long>(out.periodic_word->size());
      if (l % q != 0) l = ((l + q - 1) / q) * q;
    }
    out.homoclinic_insert = std::move(insert);
    out.homoclinic_l = l;
  }
  return out;
}

SpecFile load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open spec file: " + path);
  Json j = Json::parse(in);
  return parse_spec_json(j);
}

Json to_json(const SpectrumEstimate& est) {
  Json j;
  j["exponents"] = est.exponents;
  j["standard_errors"] = est.se;
  j["iterations"] = est.iterations;
  j["renorm_period"] = est.renorm_period;
  j["log_det_average"] = est.log_det_average;
  Json gaps = Json::array();
  for (std::size_t i = 0; i + 1 < est.exponents.size(); ++i) {
    Json g;
    g["after_index"] = i + 1;
    g["gap"] = est.exponents[i] - est.exponents[i + 1];
    g["joint_se"] = est.joint_se(static_cast<int>(i), static_cast<int>(i) + 1);
    gaps.push_back(g);
  }
  j["gaps"] = gaps;
  return j;
}

Json to_json(const ZorichSpectrumResult& res) {
  Json j;
  j["genus"] = res.genus;
  j["restricted_dimension"] = 2 * res.genus;
  j["estimate"] = to_json(res.estimate);
  j["symmetric"] = res.symmetric();
  return j;
}

Json to_json(const SimplicityVerdict& verdict) {
  Json j;
  j["pinching"] = Json{{"ok", verdict.pinching.ok},
                       {"gap", verdict.pinching.gap},
                       {"exact", verdict.pinching.exact}};
  Json t;
  t["ok"] = verdict.twisting.ok;
  t["smallest_minor"] = verdict.twisting.smallest_minor;
  t["exact"] = verdict.twisting.exact;
  if (verdict.twisting.witness) {
    t["witness"] = Json{{"rows", verdict.twisting.witness->rows},
                        {"cols", verdict.twisting.witness->cols}};
  } else {
    t["witness"] = nullptr;
  }
  j["twisting"] = t;
  j["simple"] = verdict.simple;
  return j;
}

Json to_json(const InducedSystem& ind) {
  Json j;
  j["base"] = ind.base_cylinder.symbols;
  Json words = Json::array();
  for (const auto& rw : ind.return_words) {
    Json w;
    w["word"] = rw.word.symbols;
    w["r"] = rw.r;
    w["mass"] = rw.mass;
    words.push_back(w);
  }
  j["return_words"] = words;
  j["captured_mass"] = ind.captured_mass;
  j["measure_of_base"] = ind.measure_of_base;
  j["mean_return_time"] = ind.mean_return_time;
  return j;
}

Json to_json(const GapDiagnostic& gd) {
  return Json{{"ell", gd.ell},
              {"d_u", gd.d_u},
              {"d_s", gd.d_s},
              {"slope", gd.slope},
              {"slope_se", gd.slope_se},
              {"predicted", gd.predicted},
              {"predicted_se", gd.predicted_se},
              {"agrees_3sigma", gd.agrees()}};
}

Json to_json(const BunchingReport& rep) {
  return Json{{"N", rep.N},           {"C", rep.C},
              {"nu", rep.nu},         {"theta", rep.theta},
              {"tau", rep.tau},       {"satisfied", rep.satisfied},
              {"worst_word", rep.worst_word}};
}

Json to_json(const HolonomyMap& h) {
  Json j;
  j["direction"] = h.direction == HolonomyDirection::Stable ? "stable" : "unstable";
  j["residual"] = h.residual;
  j["iterations_used"] = h.iterations_used;
  j["increments"] = h.increments;
  Json m = Json::array();
  for (int i = 0; i < h.matrix.rows(); ++i) {
    Json row = Json::array();
    for (int c = 0; c < h.matrix.cols(); ++c) {
      row.push_back(Json{{"re", h.matrix(i, c).real()}, {"im", h.matrix(i, c).imag()}});
    }
    m.push_back(row);
  }
  j["matrix"] = m;
  return j;
}

Json to_json(const DiracTrace& trace) {
  Json j;
  j["final_dispersion"] = trace.final_dispersion;
  j["converged"] = trace.converged;
  j["steps"] = trace.dispersions.size();
  return j;
}

Json to_json(const MonoidReport& rep) {
  return Json{{"best_eccentricity", rep.best_eccentricity},
              {"best_ecc_word", rep.best_ecc_word},
              {"pinching_evidence", rep.pinching_evidence},
              {"twisting_evidence", rep.twisting_evidence},
              {"twisting_word", rep.twisting_word},
              {"words_examined", rep.words_examined}};
}

Json to_json(const VandermondeResult& v) {
  Json j;
  j["det"] = to_string(v.det);
  j["product_part"] = to_string(v.product_part);
  j["schur_defined"] = v.schur_defined;
  j["schur_part"] = v.schur_defined ? to_string(v.schur_part) : "undefined";
  return j;
}

Json to_json(const InducingReport& rep) {
  Json j;
  j["base"] = to_json(rep.base);
  j["induced"] = to_json(rep.induced);
  j["base_cylinder_mass"] = rep.base_cylinder_mass;
  j["mean_return_time"] = rep.mean_return_time;
  j["kac_prediction"] = rep.kac_prediction;
  j["exponents_match_3sigma"] = rep.exponents_match();
  j["inconclusive"] = rep.inconclusive;
  return j;
}

Json to_json(const AdjointReport& rep) {
  Json j;
  j["original"] = to_json(rep.original);
  j["adjoint"] = to_json(rep.adjoint);
  j["match_3sigma"] = rep.match();
  return j;
}

std::string zorich_trace_csv(const QrTrace& trace) {
  std::ostringstream out;
  out << "# cocycle-spectra zorich trace v1: accel_step,cumlog columns per position\n";
  out << "accel_step";
  if (!trace.cumlog.empty())
    for (std::size_t i = 0; i < trace.cumlog[0].size(); ++i) out << ",cumlog_" << i + 1;
  out << "\n";
  for (std::size_t t = 0; t < trace.steps.size(); ++t) {
    out << trace.steps[t];
    for (double v : trace.cumlog[t]) out << "," << v;
    out << "\n";
  }
  return out.str();
}

std::string dirac_trace_csv(const DiracTrace& dirac, const EccentricityTrace& ecc,
                            const TrackingTrace& tracking) {
  std::ostringstream out;
  out << "# cocycle-spectra dirac trace v1: step,dispersion,log_eccentricity,fs_increment\n";
  out << "step,dispersion,log_eccentricity,fs_increment\n";
  std::size_t n = dirac.dispersions.size();
  for (std::size_t t = 0; t < n; ++t) {
    out << t + 1 << "," << dirac.dispersions[t] << ",";
    if (t < ecc.log_eccentricity.size()) out << ecc.log_eccentricity[t];
    out << ",";
    if (t >= 1 && t - 1 < tracking.fs_increments.size()) out << tracking.fs_increments[t - 1];
    out << "\n";
  }
  return out.str();
}

std::string batch_exponents_csv(const SpectrumEstimate& est) {
  std::ostringstream out;
  out << "# cocycle-spectra batch exponents v1: batch then one estimate per position\n";
  out << "batch";
  for (std::size_t i = 0; i < est.exponents.size(); ++i) out << ",exponent_" << i + 1;
  out << "\n";
  for (std::size_t b = 0; b < est.batch_means.size(); ++b) {
    out << b + 1;
    for (double v : est.batch_means[b]) out << "," << v;
    out << "\n";
  }
  out << "total";
  for (double v : est.exponents) out << "," << v;
  out << "\n";
  return out.str();
}

std::string zorich_orbit_trace_csv(const PermutationPair& start, long steps, RandomSource rng,
                                   long step_cap) {
  std::ostringstream out;
  out << "# cocycle-spectra zorich orbit v1: step,type,n,log_norm_z,lambda_1..lambda_d\n";
  out << "step,type,n,log_norm_z";
  for (int i = 1; i <= start.d; ++i) out << ",lambda_" << i;
  out << "\n";
  PermutationPair pair = start;
  std::vector<double> lambda = random_simplex_point(start.d, rng);
  for (long t = 1; t <= steps; ++t) {
    ZorichStepF z = zorich_step(pair, lambda, step_cap);
    out << t << "," << z.type_eps << "," << z.n << ","
        << std::log(frobenius_norm(z.cocycle_matrix()));
    for (double v : z.end_lambda) out << "," << v;
    out << "\n";
    pair = z.end_pair;
    lambda = z.end_lambda;
  }
  return out.str();
}

}  // namespace cospec
