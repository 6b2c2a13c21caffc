#include "dladmm/metrics.hpp"

#include <sstream>

#include <json.hpp>

namespace dladmm {

namespace {

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ';';
    os << v[i];
  }
  return os.str();
}

}  // namespace

const char* MetricsWriter::header() {
  return "iter,objective_F,lagrangian,residual_norm,train_accuracy,"
         "test_accuracy,descent_ok,ck_term,lemma2,rho_used,tau_bar,tau,"
         "theta_bar,theta,wall_ms";
}

MetricsWriter::MetricsWriter(const std::string& path, MetricsFormat format)
    : out_(path, std::ios::app), format_(format) {
  if (!out_) throw Error(ErrorKind::config, "cannot open metrics file " + path);
  if (format_ == MetricsFormat::csv && out_.tellp() == 0)
    out_ << header() << '\n';
}

void MetricsWriter::write(const IterationRecord& r) {
  if (format_ == MetricsFormat::csv) {
    std::ostringstream os;
    os.precision(17);
    os << r.iter << ',' << r.objective_F << ',' << r.lagrangian << ','
       << r.residual_norm << ',' << r.train_accuracy << ',' << r.test_accuracy
       << ',' << (r.descent_ok ? 1 : 0) << ',' << r.ck_term << ',' << r.lemma2
       << ',' << r.rho_used << ',' << join(r.tau_bar) << ',' << join(r.tau)
       << ',' << join(r.theta_bar) << ',' << join(r.theta) << ',' << r.wall_ms;
    out_ << os.str() << '\n';
  } else {
    nlohmann::json j{{"iter", r.iter},
                     {"objective_F", r.objective_F},
                     {"lagrangian", r.lagrangian},
                     {"residual_norm", r.residual_norm},
                     {"train_accuracy", r.train_accuracy},
                     {"test_accuracy", r.test_accuracy},
                     {"descent_ok", r.descent_ok},
                     {"ck_term", r.ck_term},
                     {"lemma2", r.lemma2},
                     {"rho_used", r.rho_used},
                     {"tau_bar", r.tau_bar},
                     {"tau", r.tau},
                     {"theta_bar", r.theta_bar},
                     {"theta", r.theta},
                     {"wall_ms", r.wall_ms}};
    out_ << j.dump() << '\n';
  }
  out_.flush();
}

}  // namespace dladmm
