#include "maxdist/distributions.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace maxdist {

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

std::vector<double> normalized_probs(const DiscreteDist& d) {
    const double total = std::accumulate(d.probs.begin(), d.probs.end(), 0.0);
    std::vector<double> out(d.probs.size());
    for (std::size_t i = 0; i < d.probs.size(); ++i) out[i] = d.probs[i] / total;
    return out;
}

double parse_number(const std::string& token, const std::string& context) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad number '" + token + "' in " + context);
    }
    if (used != token.size() || !std::isfinite(value)) {
        throw std::invalid_argument("bad number '" + token + "' in " + context);
    }
    return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, sep)) parts.push_back(part);
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

}  // namespace

void DistributionSpec::validate() const {
    if (const auto* d = std::get_if<NormalDist>(&family)) {
        require(std::isfinite(d->mu), "normal: mu must be finite");
        require(std::isfinite(d->sigma) && d->sigma > 0.0, "normal: sigma must be positive");
    } else if (const auto* d = std::get_if<UniformDist>(&family)) {
        require(std::isfinite(d->a) && std::isfinite(d->b), "uniform: bounds must be finite");
        require(d->a < d->b, "uniform: need a < b");
    } else if (const auto* d = std::get_if<SparseTwoPointDist>(&family)) {
        require(std::isfinite(d->a) && d->a != 0.0, "sparse2: atom must be nonzero");
        require(d->epsilon > 0.0 && d->epsilon <= 1.0, "sparse2: epsilon must lie in (0,1]");
    } else if (const auto* d = std::get_if<CenteredExponentialDist>(&family)) {
        require(std::isfinite(d->rate) && d->rate > 0.0, "cexp: rate must be positive");
    } else {
        const auto& dd = std::get<DiscreteDist>(family);
        require(!dd.values.empty(), "discrete: needs at least one atom");
        require(dd.values.size() == dd.probs.size(), "discrete: values/probs length mismatch");
        double total = 0.0;
        for (std::size_t i = 0; i < dd.values.size(); ++i) {
            require(std::isfinite(dd.values[i]), "discrete: atom must be finite");
            require(std::isfinite(dd.probs[i]) && dd.probs[i] >= 0.0,
                    "discrete: weight must be nonnegative");
            total += dd.probs[i];
        }
        require(total > 0.0, "discrete: weights must not all vanish");
        bool seen = false, distinct = false;
        double first = 0.0;
        for (std::size_t i = 0; i < dd.values.size(); ++i) {
            if (dd.probs[i] <= 0.0) continue;
            if (!seen) {
                first = dd.values[i];
                seen = true;
            } else if (dd.values[i] != first) {
                distinct = true;
            }
        }
        require(distinct, "discrete: degenerate spec, needs two distinct atoms with weight");
    }
}

double DistributionSpec::mean() const {
    if (const auto* d = std::get_if<NormalDist>(&family)) return d->mu;
    if (const auto* d = std::get_if<UniformDist>(&family)) return 0.5 * (d->a + d->b);
    if (std::holds_alternative<SparseTwoPointDist>(family)) return 0.0;
    if (std::holds_alternative<CenteredExponentialDist>(family)) return 0.0;
    const auto& d = std::get<DiscreteDist>(family);
    const auto w = normalized_probs(d);
    double m = 0.0;
    for (std::size_t i = 0; i < d.values.size(); ++i) m += w[i] * d.values[i];
    return m;
}

double DistributionSpec::variance() const {
    if (const auto* d = std::get_if<NormalDist>(&family)) return d->sigma * d->sigma;
    if (const auto* d = std::get_if<UniformDist>(&family)) {
        const double w = d->b - d->a;
        return w * w / 12.0;
    }
    if (const auto* d = std::get_if<SparseTwoPointDist>(&family)) {
        return d->a * d->a * d->epsilon;
    }
    if (const auto* d = std::get_if<CenteredExponentialDist>(&family)) {
        return 1.0 / (d->rate * d->rate);
    }
    const auto& d = std::get<DiscreteDist>(family);
    const auto w = normalized_probs(d);
    const double m = mean();
    double v = 0.0;
    for (std::size_t i = 0; i < d.values.size(); ++i) {
        const double c = d.values[i] - m;
        v += w[i] * c * c;
    }
    return v;
}

double DistributionSpec::central_m4() const {
    if (const auto* d = std::get_if<NormalDist>(&family)) {
        const double s2 = d->sigma * d->sigma;
        return 3.0 * s2 * s2;
    }
    if (const auto* d = std::get_if<UniformDist>(&family)) {
        const double w = d->b - d->a;
        const double w2 = w * w;
        return w2 * w2 / 80.0;
    }
    if (const auto* d = std::get_if<SparseTwoPointDist>(&family)) {
        const double a2 = d->a * d->a;
        return a2 * a2 * d->epsilon;
    }
    if (const auto* d = std::get_if<CenteredExponentialDist>(&family)) {
        const double r2 = d->rate * d->rate;
        return 9.0 / (r2 * r2);
    }
    const auto& d = std::get<DiscreteDist>(family);
    const auto w = normalized_probs(d);
    const double m = mean();
    double m4 = 0.0;
    for (std::size_t i = 0; i < d.values.size(); ++i) {
        const double c = d.values[i] - m;
        const double c2 = c * c;
        m4 += w[i] * c2 * c2;
    }
    return m4;
}

double DistributionSpec::corr_q2() const {
    const double m2 = central_m2();
    if (m2 <= 0.0) throw std::domain_error("corr_q2 needs positive variance");
    const double m4 = central_m4();
    return (m4 - m2 * m2) / (2.0 * (m4 + m2 * m2));
}

bool DistributionSpec::finite_support() const {
    return std::holds_alternative<SparseTwoPointDist>(family) ||
           std::holds_alternative<DiscreteDist>(family);
}

std::vector<std::pair<double, double>> DistributionSpec::support() const {
    if (const auto* d = std::get_if<SparseTwoPointDist>(&family)) {
        return {{-d->a, 0.5 * d->epsilon}, {0.0, 1.0 - d->epsilon}, {d->a, 0.5 * d->epsilon}};
    }
    if (const auto* d = std::get_if<DiscreteDist>(&family)) {
        const auto w = normalized_probs(*d);
        std::vector<std::pair<double, double>> out;
        out.reserve(d->values.size());
        for (std::size_t i = 0; i < d->values.size(); ++i) out.emplace_back(d->values[i], w[i]);
        return out;
    }
    throw std::logic_error("support() requires a finite-support family");
}

TailClass DistributionSpec::tail_class() const {
    if (std::holds_alternative<NormalDist>(family)) return TailClass::SubGaussianish;
    if (std::holds_alternative<CenteredExponentialDist>(family)) return TailClass::SubExponential;
    return TailClass::Bounded;
}

double DistributionSpec::sample(rng::Stream& stream) const {
    if (const auto* d = std::get_if<NormalDist>(&family)) {
        return d->mu + d->sigma * stream.next_normal();
    }
    if (const auto* d = std::get_if<UniformDist>(&family)) {
        return d->a + (d->b - d->a) * stream.next_double();
    }
    if (const auto* d = std::get_if<SparseTwoPointDist>(&family)) {
        const double u = stream.next_double();
        if (u < 0.5 * d->epsilon) return -d->a;
        if (u < d->epsilon) return d->a;
        return 0.0;
    }
    if (const auto* d = std::get_if<CenteredExponentialDist>(&family)) {
        return -std::log(stream.next_double_pos()) / d->rate - 1.0 / d->rate;
    }
    const auto& d = std::get<DiscreteDist>(family);
    const double total = std::accumulate(d.probs.begin(), d.probs.end(), 0.0);
    const double u = stream.next_double() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < d.values.size(); ++i) {
        acc += d.probs[i];
        if (u < acc) return d.values[i];
    }
    return d.values.back();
}

std::string DistributionSpec::to_string() const {
    if (const auto* d = std::get_if<NormalDist>(&family)) {
        return "normal:" + fmt(d->mu) + ":" + fmt(d->sigma);
    }
    if (const auto* d = std::get_if<UniformDist>(&family)) {
        return "uniform:" + fmt(d->a) + ":" + fmt(d->b);
    }
    if (const auto* d = std::get_if<SparseTwoPointDist>(&family)) {
        return "sparse2:" + fmt(d->a) + ":" + fmt(d->epsilon);
    }
    if (const auto* d = std::get_if<CenteredExponentialDist>(&family)) {
        return "cexp:" + fmt(d->rate);
    }
    const auto& d = std::get<DiscreteDist>(family);
    std::string out = "discrete:";
    for (std::size_t i = 0; i < d.values.size(); ++i) {
        if (i) out += ',';
        out += fmt(d.values[i]) + "@" + fmt(d.probs[i]);
    }
    return out;
}

DistributionSpec DistributionSpec::parse(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.empty() || parts[0].empty()) {
        throw std::invalid_argument("empty distribution spec");
    }
    const std::string& name = parts[0];
    const auto arity = [&](std::size_t lo, std::size_t hi) {
        if (parts.size() - 1 < lo || parts.size() - 1 > hi) {
            throw std::invalid_argument("distribution '" + name + "' takes " +
                                        std::to_string(lo) + ".." + std::to_string(hi) +
                                        " parameters");
        }
    };
    DistributionSpec spec;
    if (name == "normal") {
        arity(0, 2);
        NormalDist d;
        if (parts.size() > 1) d.mu = parse_number(parts[1], text);
        if (parts.size() > 2) d.sigma = parse_number(parts[2], text);
        spec.family = d;
    } else if (name == "uniform") {
        arity(0, 2);
        UniformDist d;
        if (parts.size() > 1) d.a = parse_number(parts[1], text);
        if (parts.size() > 2) d.b = parse_number(parts[2], text);
        spec.family = d;
    } else if (name == "sparse2") {
        arity(0, 2);
        SparseTwoPointDist d;
        if (parts.size() > 1) d.a = parse_number(parts[1], text);
        if (parts.size() > 2) d.epsilon = parse_number(parts[2], text);
        spec.family = d;
    } else if (name == "cexp") {
        arity(0, 1);
        CenteredExponentialDist d;
        if (parts.size() > 1) d.rate = parse_number(parts[1], text);
        spec.family = d;
    } else if (name == "bernoulli") {
        arity(0, 0);
        spec.family = DiscreteDist{{0.0, 1.0}, {0.5, 0.5}};
    } else if (name == "discrete") {
        arity(1, 1);
        DiscreteDist d;
        for (const auto& atom : split(parts[1], ',')) {
            const auto at = atom.find('@');
            if (at == std::string::npos) {
                throw std::invalid_argument("discrete atom '" + atom + "' needs value@weight");
            }
            d.values.push_back(parse_number(atom.substr(0, at), text));
            d.probs.push_back(parse_number(atom.substr(at + 1), text));
        }
        spec.family = d;
    } else {
        throw std::invalid_argument("unknown distribution '" + name + "'");
    }
    spec.validate();
    return spec;
}

}  // namespace maxdist
