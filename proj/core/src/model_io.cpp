#include "cartelscreen/model_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "cartelscreen/errors.hpp"

namespace cartelscreen {
namespace {

constexpr const char* kMagic = "cartelscreen-ensemble v1";

std::string hex(double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v,
                               std::chars_format::hex);
  if (ec != std::errc()) throw IoError("model write: number encoding failed");
  return std::string(buf, p);
}

class Reader {
 public:
  Reader(const std::string& path) : in_(path), path_(path) {
    if (!in_) throw IoError("cannot open model file " + path);
  }

  std::string line() {
    std::string l;
    if (!std::getline(in_, l)) {
      throw SchemaError(path_ + ": truncated model file");
    }
    if (!l.empty() && l.back() == '\r') l.pop_back();
    return l;
  }

  std::vector<std::string> tokens(const std::string& expect_head) {
    std::istringstream ss(line());
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t) toks.push_back(t);
    if (toks.empty() || toks[0] != expect_head) {
      throw SchemaError(path_ + ": expected '" + expect_head + "' record");
    }
    return toks;
  }

 private:
  std::ifstream in_;
  std::string path_;
};

double parse_hex(const std::string& t) {
  double v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v,
                                 std::chars_format::hex);
  if (ec != std::errc() || p != t.data() + t.size()) {
    throw SchemaError("model file: bad number '" + t + "'");
  }
  return v;
}

long long parse_ll(const std::string& t) {
  long long v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) {
    throw SchemaError("model file: bad integer '" + t + "'");
  }
  return v;
}

void write_vector(std::ostream& out, const char* head,
                  const std::vector<double>& v) {
  out << head << ' ' << v.size();
  for (const double x : v) out << ' ' << hex(x);
  out << '\n';
}

std::vector<double> read_vector(Reader& r, const char* head) {
  const auto toks = r.tokens(head);
  if (toks.size() < 2) throw SchemaError("model file: short record");
  const std::size_t count = static_cast<std::size_t>(parse_ll(toks[1]));
  if (toks.size() != count + 2) {
    throw SchemaError(std::string("model file: ") + head + " length mismatch");
  }
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = parse_hex(toks[i + 2]);
  return v;
}

void write_linear(std::ostream& out, const char* head, const LinearModel& m) {
  out << head << ' ' << (m.converged ? 1 : 0) << ' ' << hex(m.intercept)
      << ' ' << m.coef.size();
  for (const double c : m.coef) out << ' ' << hex(c);
  out << '\n';
}

LinearModel read_linear(Reader& r, const char* head) {
  const auto toks = r.tokens(head);
  if (toks.size() < 4) throw SchemaError("model file: short linear record");
  LinearModel m;
  m.converged = parse_ll(toks[1]) != 0;
  m.intercept = parse_hex(toks[2]);
  const std::size_t count = static_cast<std::size_t>(parse_ll(toks[3]));
  if (toks.size() != count + 4) {
    throw SchemaError("model file: linear record length mismatch");
  }
  m.coef.resize(count);
  for (std::size_t i = 0; i < count; ++i) m.coef[i] = parse_hex(toks[i + 4]);
  return m;
}

void write_forest(std::ostream& out, const char* head, const ForestModel& f) {
  out << head << ' ' << f.trees.size() << '\n';
  for (const Tree& t : f.trees) {
    out << "tree " << t.nodes.size() << '\n';
    for (const TreeNode& n : t.nodes) {
      out << n.feature << ' ' << n.left << ' ' << n.right << ' '
          << hex(n.threshold) << ' ' << hex(n.value) << '\n';
    }
  }
}

ForestModel read_forest(Reader& r, const char* head) {
  const auto toks = r.tokens(head);
  if (toks.size() != 2) throw SchemaError("model file: bad forest record");
  ForestModel f;
  const long long trees = parse_ll(toks[1]);
  f.trees.reserve(trees);
  for (long long t = 0; t < trees; ++t) {
    const auto th = r.tokens("tree");
    if (th.size() != 2) throw SchemaError("model file: bad tree record");
    Tree tree;
    const long long nodes = parse_ll(th[1]);
    tree.nodes.reserve(nodes);
    for (long long k = 0; k < nodes; ++k) {
      std::istringstream ss(r.line());
      std::string a, b, c, d, e;
      if (!(ss >> a >> b >> c >> d >> e)) {
        throw SchemaError("model file: bad tree node");
      }
      TreeNode node;
      node.feature = static_cast<int>(parse_ll(a));
      node.left = static_cast<int>(parse_ll(b));
      node.right = static_cast<int>(parse_ll(c));
      node.threshold = parse_hex(d);
      node.value = parse_hex(e);
      tree.nodes.push_back(node);
    }
    f.trees.push_back(std::move(tree));
  }
  return f;
}

}  // namespace

void save_ensemble(const TrainedEnsemble& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write model file " + path);
  out << kMagic << '\n';
  out << "seed " << model.seed << '\n';

  const LearnerConfig& hp = model.hp;
  out << "hp " << hex(hp.logistic_ridge) << ' ' << hp.logistic_max_iter << ' '
      << hex(hp.logistic_tol) << ' ' << hp.lasso_path_points << ' '
      << hex(hp.lasso_min_ratio) << ' ' << hp.lasso_cv_folds << ' '
      << hp.lasso_max_sweeps << ' ' << hex(hp.lasso_tol) << ' '
      << hex(hp.svm_c) << ' ' << hp.svm_epochs << ' ' << hp.svm_platt_folds
      << ' ' << hp.tree_min_leaf << ' ' << hp.bagging_trees << ' '
      << hp.bagging_min_leaf << ' ' << hp.forest_trees << ' '
      << hp.forest_min_leaf << ' ' << hp.forest_mtry << ' '
      << hp.ensemble_cv_folds << '\n';

  out << "features " << model.feature_names.size() << '\n';
  for (const std::string& name : model.feature_names) {
    out << "feature " << name << '\n';
  }
  write_vector(out, "prep_medians", model.prep.medians());
  write_vector(out, "prep_means", model.prep.means());
  write_vector(out, "prep_sds", model.prep.sds());
  write_vector(out, "weights",
               {model.weights.begin(), model.weights.end()});

  write_linear(out, "logistic", model.logistic);
  out << "lasso_lambda " << hex(model.lasso.lambda) << '\n';
  write_vector(out, "lasso_path", model.lasso.path);
  write_linear(out, "lasso", model.lasso.model);

  out << "svm_b " << hex(model.svm.b) << ' ' << hex(model.svm.platt_a) << ' '
      << hex(model.svm.platt_c) << '\n';
  write_vector(out, "svm_w", model.svm.w);
  write_vector(out, "svm_trace", model.svm.objective_trace);

  write_forest(out, "bagging", model.bagging);
  write_forest(out, "forest", model.forest);
  out << "end\n";
  if (!out) throw IoError("write failed: " + path);
}

TrainedEnsemble load_ensemble(const std::string& path) {
  Reader r(path);
  if (r.line() != kMagic) {
    throw SchemaError(path + ": not a recognized model container");
  }
  TrainedEnsemble model;

  const auto seed_toks = r.tokens("seed");
  if (seed_toks.size() != 2) throw SchemaError(path + ": bad seed record");
  model.seed = static_cast<std::uint64_t>(parse_ll(seed_toks[1]));

  const auto hp = r.tokens("hp");
  if (hp.size() != 19) throw SchemaError(path + ": bad hp record");
  LearnerConfig& lc = model.hp;
  lc.logistic_ridge = parse_hex(hp[1]);
  lc.logistic_max_iter = static_cast<int>(parse_ll(hp[2]));
  lc.logistic_tol = parse_hex(hp[3]);
  lc.lasso_path_points = static_cast<int>(parse_ll(hp[4]));
  lc.lasso_min_ratio = parse_hex(hp[5]);
  lc.lasso_cv_folds = static_cast<int>(parse_ll(hp[6]));
  lc.lasso_max_sweeps = static_cast<int>(parse_ll(hp[7]));
  lc.lasso_tol = parse_hex(hp[8]);
  lc.svm_c = parse_hex(hp[9]);
  lc.svm_epochs = static_cast<int>(parse_ll(hp[10]));
  lc.svm_platt_folds = static_cast<int>(parse_ll(hp[11]));
  lc.tree_min_leaf = static_cast<int>(parse_ll(hp[12]));
  lc.bagging_trees = static_cast<int>(parse_ll(hp[13]));
  lc.bagging_min_leaf = static_cast<int>(parse_ll(hp[14]));
  lc.forest_trees = static_cast<int>(parse_ll(hp[15]));
  lc.forest_min_leaf = static_cast<int>(parse_ll(hp[16]));
  lc.forest_mtry = static_cast<int>(parse_ll(hp[17]));
  lc.ensemble_cv_folds = static_cast<int>(parse_ll(hp[18]));

  const auto feat = r.tokens("features");
  if (feat.size() != 2) throw SchemaError(path + ": bad features record");
  const long long p = parse_ll(feat[1]);
  for (long long i = 0; i < p; ++i) {
    const auto f = r.tokens("feature");
    if (f.size() != 2) throw SchemaError(path + ": bad feature name record");
    model.feature_names.push_back(f[1]);
  }

  auto medians = read_vector(r, "prep_medians");
  auto means = read_vector(r, "prep_means");
  auto sds = read_vector(r, "prep_sds");
  model.prep.restore(std::move(medians), std::move(means), std::move(sds));

  const auto w = read_vector(r, "weights");
  if (w.size() != 5) throw SchemaError(path + ": bad weights record");
  std::copy(w.begin(), w.end(), model.weights.begin());

  model.logistic = read_linear(r, "logistic");
  const auto ll = r.tokens("lasso_lambda");
  if (ll.size() != 2) throw SchemaError(path + ": bad lasso_lambda record");
  model.lasso.lambda = parse_hex(ll[1]);
  model.lasso.path = read_vector(r, "lasso_path");
  model.lasso.model = read_linear(r, "lasso");

  const auto sb = r.tokens("svm_b");
  if (sb.size() != 4) throw SchemaError(path + ": bad svm_b record");
  model.svm.b = parse_hex(sb[1]);
  model.svm.platt_a = parse_hex(sb[2]);
  model.svm.platt_c = parse_hex(sb[3]);
  model.svm.w = read_vector(r, "svm_w");
  model.svm.objective_trace = read_vector(r, "svm_trace");

  model.bagging = read_forest(r, "bagging");
  model.forest = read_forest(r, "forest");
  r.tokens("end");
  return model;
}

}  // namespace cartelscreen
