#pragma once

// Control functions: non-decreasing maps [0,inf) -> [0,inf], built as
// expression trees so that pipelines can be serialized and replayed. All
// evaluation is capped at y_max; values beyond the cap evaluate to the
// +infinity sentinel.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace curvdecay::control {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double default_y_max() {
  if (const char* env = std::getenv("CURVDECAY_YMAX")) {
    double v = std::atof(env);
    if (v > 0) return v;
  }
  return 1e12;
}

enum class Kind { Const, Linear, Sum, Scale, Max, Compose, Power, GenInv, Table };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Kind kind;
  double c = 0.0;             // Const value, Scale factor, Power exponent
  double a = 0.0, b = 0.0;    // Linear coefficients
  std::vector<NodePtr> kids;  // Sum/Max: n-ary; Scale/GenInv: 1; Compose: {outer, inner}
  std::vector<double> xs, ys; // Table knots
};

namespace detail {

inline double eval_node(const Node& n, double x, double y_max);

// sup{ y <= y_max : g(y) <= x }, with sup(empty) = 0. Exponential search for
// a bracket, then bisection to 1e-9.
inline double generalized_inverse(const Node& g, double x, double y_max) {
  auto gv = [&](double y) { return eval_node(g, y, y_max); };
  if (gv(0.0) > x) return 0.0;
  if (gv(y_max) <= x) return y_max;
  double lo = 0.0, hi = 1.0;
  while (hi < y_max && gv(hi) <= x) {
    lo = hi;
    hi = std::min(hi * 2.0, y_max);
  }
  while (hi - lo > 1e-9) {
    double mid = 0.5 * (lo + hi);
    if (gv(mid) <= x) lo = mid; else hi = mid;
  }
  return lo;
}

inline double eval_table(const Node& n, double x) {
  const auto& xs = n.xs;
  const auto& ys = n.ys;
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = static_cast<std::size_t>(it - xs.begin());
  double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + t * (ys[i] - ys[i - 1]);
}

inline double eval_node(const Node& n, double x, double y_max) {
  if (std::isinf(x)) return kInf;
  double v = 0.0;
  switch (n.kind) {
    case Kind::Const: v = n.c; break;
    case Kind::Linear: v = n.a * x + n.b; break;
    case Kind::Sum: {
      for (const auto& k : n.kids) {
        double w = eval_node(*k, x, y_max);
        if (std::isinf(w)) return kInf;
        v += w;
      }
      break;
    }
    case Kind::Scale: {
      double w = eval_node(*n.kids[0], x, y_max);
      if (std::isinf(w)) return n.c == 0.0 ? 0.0 : kInf;
      v = n.c * w;
      break;
    }
    case Kind::Max: {
      for (const auto& k : n.kids) {
        double w = eval_node(*k, x, y_max);
        if (std::isinf(w)) return kInf;
        v = std::max(v, w);
      }
      break;
    }
    case Kind::Compose: {
      double w = eval_node(*n.kids[1], x, y_max);
      if (std::isinf(w)) return kInf;
      v = eval_node(*n.kids[0], w, y_max);
      break;
    }
    case Kind::Power: v = std::pow(x, n.c); break;
    case Kind::GenInv: v = generalized_inverse(*n.kids[0], x, y_max); break;
    case Kind::Table: v = eval_table(n, x); break;
  }
  if (std::isnan(v)) throw std::domain_error("control function produced NaN");
  return v > y_max ? kInf : v;
}

}  // namespace detail

class ControlFunction {
 public:
  ControlFunction() : root_(make_node(Kind::Linear, [](Node& n) { n.a = 1; })) {}

  double operator()(double x) const {
    if (std::isnan(x)) throw std::domain_error("control function evaluated at NaN");
    if (x < 0) throw std::domain_error("control function evaluated at negative input");
    return detail::eval_node(*root_, x, y_max_);
  }

  double y_max() const { return y_max_; }
  ControlFunction with_y_max(double ym) const {
    ControlFunction f = *this;
    f.y_max_ = ym;
    return f;
  }

  static ControlFunction constant(double c) {
    require(c >= 0, "Const value must be >= 0");
    return ControlFunction(make_node(Kind::Const, [&](Node& n) { n.c = c; }));
  }
  static ControlFunction linear(double a, double b) {
    require(a >= 0 && b >= 0, "Linear(a,b) requires a,b >= 0");
    return ControlFunction(make_node(Kind::Linear, [&](Node& n) { n.a = a; n.b = b; }));
  }
  static ControlFunction identity() { return linear(1.0, 0.0); }
  static ControlFunction power(double p) {
    require(p >= 1.0, "Power exponent must be >= 1");
    return ControlFunction(make_node(Kind::Power, [&](Node& n) { n.c = p; }));
  }
  static ControlFunction table(std::vector<double> xs, std::vector<double> ys) {
    require(xs.size() == ys.size() && xs.size() >= 2, "table needs >= 2 knots");
    for (std::size_t i = 1; i < xs.size(); ++i) {
      require(xs[i] > xs[i - 1], "table x-values must be strictly increasing");
      require(ys[i] >= ys[i - 1], "table y-values must be non-decreasing");
    }
    return ControlFunction(make_node(Kind::Table, [&](Node& n) {
      n.xs = std::move(xs);
      n.ys = std::move(ys);
    }));
  }
  static ControlFunction sum(std::vector<ControlFunction> fs) {
    return nary(Kind::Sum, std::move(fs));
  }
  static ControlFunction max_of(std::vector<ControlFunction> fs) {
    return nary(Kind::Max, std::move(fs));
  }
  static ControlFunction scale(double lambda, const ControlFunction& f) {
    require(lambda >= 0, "Scale factor must be >= 0");
    return ControlFunction(make_node(Kind::Scale, [&](Node& n) {
      n.c = lambda;
      n.kids = {f.root_};
    }), f.y_max_);
  }
  // outer after inner
  static ControlFunction compose(const ControlFunction& outer, const ControlFunction& inner) {
    return ControlFunction(make_node(Kind::Compose, [&](Node& n) {
      n.kids = {outer.root_, inner.root_};
    }), std::max(outer.y_max_, inner.y_max_));
  }
  static ControlFunction geninv(const ControlFunction& g) {
    return ControlFunction(make_node(Kind::GenInv, [&](Node& n) {
      n.kids = {g.root_};
    }), g.y_max_);
  }
  // sqrt is not a primitive: Power requires exponent >= 1, so take the
  // generalized inverse of y -> y^2.
  static ControlFunction sqrt() { return geninv(power(2.0)); }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j = node_json(*root_);
    j["y_max"] = y_max_;
    return j;
  }

  static ControlFunction from_json(const nlohmann::json& j) {
    ControlFunction f(parse_node(j));
    if (j.contains("y_max")) f.y_max_ = j.at("y_max").get<double>();
    return f;
  }

 private:
  explicit ControlFunction(NodePtr root, double ym = default_y_max())
      : root_(std::move(root)), y_max_(ym) {}

  static void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
  }

  template <typename Init>
  static NodePtr make_node(Kind k, Init&& init) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    init(*n);
    return n;
  }

  static ControlFunction nary(Kind k, std::vector<ControlFunction> fs) {
    require(!fs.empty(), "sum/max needs at least one child");
    double ym = 0;
    auto n = std::make_shared<Node>();
    n->kind = k;
    for (auto& f : fs) {
      n->kids.push_back(f.root_);
      ym = std::max(ym, f.y_max_);
    }
    return ControlFunction(n, ym);
  }

  static nlohmann::ordered_json node_json(const Node& n) {
    nlohmann::ordered_json j;
    switch (n.kind) {
      case Kind::Const: j["kind"] = "const"; j["c"] = n.c; break;
      case Kind::Linear: j["kind"] = "linear"; j["a"] = n.a; j["b"] = n.b; break;
      case Kind::Sum:
      case Kind::Max: {
        j["kind"] = n.kind == Kind::Sum ? "sum" : "max";
        auto arr = nlohmann::ordered_json::array();
        for (const auto& k : n.kids) arr.push_back(node_json(*k));
        j["children"] = arr;
        break;
      }
      case Kind::Scale:
        j["kind"] = "scale";
        j["lambda"] = n.c;
        j["child"] = node_json(*n.kids[0]);
        break;
      case Kind::Compose:
        j["kind"] = "compose";
        j["outer"] = node_json(*n.kids[0]);
        j["inner"] = node_json(*n.kids[1]);
        break;
      case Kind::Power: j["kind"] = "power"; j["p"] = n.c; break;
      case Kind::GenInv:
        j["kind"] = "geninv";
        j["child"] = node_json(*n.kids[0]);
        break;
      case Kind::Table: j["kind"] = "table"; j["xs"] = n.xs; j["ys"] = n.ys; break;
    }
    return j;
  }

  static NodePtr parse_node(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "const") return constant(j.at("c").get<double>()).root_;
    if (kind == "linear") return linear(j.at("a").get<double>(), j.at("b").get<double>()).root_;
    if (kind == "power") return power(j.at("p").get<double>()).root_;
    if (kind == "table")
      return table(j.at("xs").get<std::vector<double>>(),
                   j.at("ys").get<std::vector<double>>()).root_;
    if (kind == "sum" || kind == "max") {
      std::vector<ControlFunction> kids;
      for (const auto& cj : j.at("children")) kids.push_back(ControlFunction(parse_node(cj)));
      return (kind == "sum" ? sum(std::move(kids)) : max_of(std::move(kids))).root_;
    }
    if (kind == "scale")
      return scale(j.at("lambda").get<double>(), ControlFunction(parse_node(j.at("child")))).root_;
    if (kind == "compose")
      return compose(ControlFunction(parse_node(j.at("outer"))),
                     ControlFunction(parse_node(j.at("inner")))).root_;
    if (kind == "geninv") return geninv(ControlFunction(parse_node(j.at("child")))).root_;
    throw std::invalid_argument("unknown control function kind: " + kind);
  }

  NodePtr root_;
  double y_max_ = default_y_max();
};

// Spot check used by preconditions: non-decreasing on a sampled grid.
inline bool non_decreasing_on_grid(const ControlFunction& f, double lo, double hi,
                                   int points = 256, double tol = 1e-9) {
  double prev = -kInf;
  for (int i = 0; i < points; ++i) {
    double x = lo + (hi - lo) * i / (points - 1);
    double v = f(x);
    if (std::isinf(v)) return true;  // capped tail, stays capped by monotone parts
    if (v < prev - tol) return false;
    prev = v;
  }
  return true;
}

}  // namespace curvdecay::control
