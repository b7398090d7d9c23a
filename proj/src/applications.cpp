#include "bellbound/applications.hpp"

#include "bellbound/counter_rng.hpp"
#include "bellbound/errors.hpp"
#include "bellbound/parallel.hpp"
#include "bellbound/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <sstream>
#include <system_error>

namespace bellbound {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double parse_double(std::string_view text, std::string_view what) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw DomainError("cannot parse " + std::string(what) + " '" + std::string(text) + "'");
    }
    return v;
}

// Running mean and sum of squared deviations (Welford), mergeable.
struct Moments {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        count += 1.0;
        const double d = x - mean;
        mean += d / count;
        m2 += d * (x - mean);
    }

    void merge(const Moments& o) {
        if (o.count == 0.0) return;
        const double total = count + o.count;
        const double d = o.mean - mean;
        mean += d * o.count / total;
        m2 += o.m2 + d * d * count * o.count / total;
        count = total;
    }
};

double sample_poisson(double beta, CounterRng& rng) {
    const double u = rng.uniform();
    double pmf = std::exp(-beta);
    double cdf = pmf;
    std::uint64_t k = 0;
    while (u > cdf) {
        ++k;
        pmf *= beta / static_cast<double>(k);
        cdf += pmf;
        if (pmf < 1e-300 && static_cast<double>(k) > beta) break;
    }
    return static_cast<double>(k);
}

double sample_discrete(const DiscreteDist& d, CounterRng& rng) {
    const double u = rng.uniform();
    double cdf = 0.0;
    for (const auto& a : d.atoms()) {
        cdf += a.prob;
        if (u <= cdf) return a.value;
    }
    return d.atoms().back().value;
}

}  // namespace

// --- DiscreteDist ------------------------------------------------------------------

DiscreteDist::DiscreteDist(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw DomainError("a distribution needs at least one atom");
    double total = 0.0;
    for (const auto& a : atoms_) {
        if (!std::isfinite(a.value) || a.value < 0.0) {
            throw DomainError("atom values must be finite and >= 0 (got " + fmt(a.value) + ")");
        }
        if (!(a.prob > 0.0 && a.prob <= 1.0)) {
            throw DomainError("atom probabilities must lie in (0, 1] (got " + fmt(a.prob) + ")");
        }
        total += a.prob;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw DomainError("atom probabilities must sum to 1 within 1e-12 (sum = " + fmt(total) + ")");
    }
}

DiscreteDist DiscreteDist::parse(std::string_view line) {
    std::vector<Atom> atoms;
    while (!line.empty()) {
        const auto comma = line.find(',');
        const auto item = line.substr(0, comma);
        const auto colon = item.find(':');
        if (colon == std::string_view::npos) {
            throw DomainError("expected value:prob, got '" + std::string(item) + "'");
        }
        atoms.push_back({parse_double(item.substr(0, colon), "value"),
                         parse_double(item.substr(colon + 1), "probability")});
        if (comma == std::string_view::npos) break;
        line.remove_prefix(comma + 1);
    }
    return DiscreteDist(std::move(atoms));
}

double DiscreteDist::mean() const noexcept {
    double m = 0.0;
    for (const auto& a : atoms_) m += a.value * a.prob;
    return m;
}

double DiscreteDist::moment(double p) const {
    double m = 0.0;
    for (const auto& a : atoms_) m += std::pow(a.value, p) * a.prob;
    return m;
}

DiscreteDist DiscreteDist::scaled(double c) const {
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("scale factor must be finite and > 0");
    auto atoms = atoms_;
    for (auto& a : atoms) a.value *= c;
    return DiscreteDist(std::move(atoms));
}

std::string DiscreteDist::to_string() const {
    std::string out;
    char buf[64];
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (i != 0) out += ',';
        auto r = std::to_chars(buf, buf + sizeof buf, atoms_[i].value);
        out.append(buf, r.ptr);
        out += ':';
        r = std::to_chars(buf, buf + sizeof buf, atoms_[i].prob);
        out.append(buf, r.ptr);
    }
    return out;
}

std::vector<DiscreteDist> read_instance(std::istream& in) {
    std::vector<DiscreteDist> out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        try {
            out.push_back(DiscreteDist::parse(std::string_view(line).substr(first)));
        } catch (const DomainError& ex) {
            throw DomainError("instance line " + std::to_string(number) + ": " + ex.what());
        }
    }
    return out;
}

std::string_view to_string(MomentMethod m) noexcept {
    return m == MomentMethod::Enumeration ? "Enumeration" : "MonteCarlo";
}

// --- bounds ------------------------------------------------------------------------

double rosenthal_bound(double p, double sum_p_moments, double sum_means, std::optional<double> beta_override) {
    if (!(p >= 2.0) || !std::isfinite(p)) throw DomainError("rosenthal_bound requires p >= 2 (got " + fmt(p) + ")");
    if (!(sum_p_moments > 0.0) || !std::isfinite(sum_p_moments) || !(sum_means > 0.0) ||
        !std::isfinite(sum_means)) {
        throw DomainError("rosenthal_bound requires positive finite moment sums");
    }
    const double beta = beta_override.value_or(1.0);
    const double log_b = bell_dobinski(BellQuery(p, beta), 1e-12).log_value;
    const double log_max = std::max(std::log(sum_p_moments), p * std::log(sum_means));
    const double value = std::exp(log_b + log_max);
    if (!std::isfinite(value)) throw OverflowError("rosenthal bound is not representable as a double");
    return value;
}

ExtremalProblem::ExtremalProblem(double a, double b, double p) : a_(a), b_(b), p_(p) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("a must be finite and > 0 (got " + fmt(a) + ")");
    if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("b must be finite and > 0 (got " + fmt(b) + ")");
    if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("p must be finite and > 1 (got p = " + fmt(p) + ")");
}

double ExtremalProblem::log_mu() const noexcept {
    return (p_ * std::log(a_) - std::log(b_)) / (p_ - 1.0);
}

double ExtremalProblem::mu() const noexcept { return std::exp(log_mu()); }

double log_schechtman_extremal(const ExtremalProblem& prob) {
    const double mu = prob.mu();
    if (!std::isfinite(mu)) throw OverflowError("mu overflows (a = " + fmt(prob.a()) + ", b = " + fmt(prob.b()) + ")");
    if (!(mu > 0.0)) throw OverflowError("mu underflows to zero");
    const double p = prob.p();
    const double log_scale = p / (p - 1.0) * (std::log(prob.b()) - std::log(prob.a()));
    return log_scale + bell_dobinski(BellQuery(p, mu), 1e-12).log_value;
}

double schechtman_extremal(const ExtremalProblem& prob) {
    const double value = std::exp(log_schechtman_extremal(prob));
    if (!std::isfinite(value) || value == 0.0) {
        throw OverflowError("extremal value is not representable as a double");
    }
    return value;
}

// --- oracles -----------------------------------------------------------------------

SumMomentResult exact_sum_moment(std::span<const DiscreteDist> dists, double p) {
    if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("p must be finite and > 0");
    if (dists.empty()) throw DomainError("at least one summand is required");
    double outcomes = 1.0;
    for (const auto& d : dists) {
        if (d.size() > kMaxEnumerationAtoms) {
            throw BudgetExceeded("enumeration supports at most " + std::to_string(kMaxEnumerationAtoms) +
                                 " atoms per distribution");
        }
        outcomes *= static_cast<double>(d.size());
    }
    if (outcomes > static_cast<double>(kEnumerationBudget)) {
        throw BudgetExceeded("enumeration needs " + fmt(outcomes) + " outcomes, budget is " +
                             std::to_string(kEnumerationBudget));
    }

    long double acc = 0.0L;
    auto visit = [&](auto&& self, std::size_t i, double sum, double prob) -> void {
        if (i == dists.size()) {
            acc += static_cast<long double>(prob) * std::pow(static_cast<long double>(sum), p);
            return;
        }
        for (const auto& a : dists[i].atoms()) self(self, i + 1, sum + a.value, prob * a.prob);
    };
    visit(visit, 0, 0.0, 1.0);
    return SumMomentResult{static_cast<double>(acc), MomentMethod::Enumeration, std::nullopt, dists.size()};
}

SumMomentResult mc_sum_moment(std::span<const Summand> summands, double p, std::size_t samples,
                              std::uint64_t seed) {
    if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("p must be finite and > 0");
    if (samples < 10'000) throw DomainError("Monte Carlo needs at least 10^4 samples");
    if (summands.empty()) throw DomainError("at least one summand is required");
    for (const auto& s : summands) {
        if (const auto* ps = std::get_if<PoissonSpec>(&s)) {
            if (!(ps->beta > 0.0 && ps->beta <= kMaxPoissonSampleBeta)) {
                throw DomainError("Poisson summands need beta in (0, 700] (got " + fmt(ps->beta) + ")");
            }
        }
    }

    // Fixed chunking keeps the merge order, and hence the result, independent
    // of the number of worker threads.
    constexpr std::size_t kChunks = 64;
    std::vector<Moments> partial(kChunks);
    parallel_for(kChunks, [&](std::size_t c) {
        const std::size_t begin = samples * c / kChunks;
        const std::size_t end = samples * (c + 1) / kChunks;
        Moments m;
        for (std::size_t i = begin; i < end; ++i) {
            CounterRng rng(seed, i);
            double sum = 0.0;
            for (const auto& s : summands) {
                sum += std::visit(
                    [&](const auto& d) {
                        if constexpr (std::is_same_v<std::decay_t<decltype(d)>, PoissonSpec>) {
                            return sample_poisson(d.beta, rng);
                        } else {
                            return sample_discrete(d, rng);
                        }
                    },
                    s);
            }
            m.add(std::pow(sum, p));
        }
        partial[c] = m;
    });
    Moments total;
    for (const auto& m : partial) total.merge(m);
    const double variance = total.m2 / (total.count - 1.0);
    return SumMomentResult{total.mean, MomentMethod::MonteCarlo, std::sqrt(variance / total.count),
                           summands.size()};
}

// --- verification -----------------------------------------------------------------

std::vector<DiscreteDist> random_family(std::uint64_t seed, std::uint64_t trial, std::size_t n_max) {
    if (n_max < 1 || n_max > 12) throw DomainError("n_max must lie in [1, 12]");
    constexpr double kOutcomeCap = 65536.0;
    CounterRng rng(seed, trial);
    const auto n = static_cast<std::size_t>(rng.between(1, n_max));
    std::vector<std::size_t> sizes(n);
    for (auto& s : sizes) s = static_cast<std::size_t>(rng.between(2, 4));
    auto outcomes = [&] {
        double prod = 1.0;
        for (auto s : sizes) prod *= static_cast<double>(s);
        return prod;
    };
    while (outcomes() > kOutcomeCap) --*std::max_element(sizes.begin(), sizes.end());

    std::vector<DiscreteDist> family;
    family.reserve(n);
    for (auto size : sizes) {
        std::vector<Atom> atoms(size);
        double total = 0.0;
        for (auto& a : atoms) {
            a.value = std::exp(std::log(1e-2) + (std::log(1e2) - std::log(1e-2)) * rng.uniform());
            a.prob = -std::log(rng.uniform());
            total += a.prob;
        }
        for (auto& a : atoms) a.prob /= total;
        family.emplace_back(std::move(atoms));
    }
    return family;
}

InequalityReport verify_inequalities(const InequalityConfig& config) {
    if (config.p_set.empty()) throw DomainError("p_set must not be empty");
    for (double p : config.p_set) {
        if (!(p >= 2.0 && p <= 6.0)) throw DomainError("p_set values must lie in [2, 6] (got " + fmt(p) + ")");
    }
    if (config.n_max < 1 || config.n_max > 12) throw DomainError("n_max must lie in [1, 12]");

    struct TrialOutcome {
        double p = 0.0;
        std::size_t n = 0;
        double exact = 0.0;
        double rosenthal = 0.0;
        double extremal = 0.0;
    };
    std::vector<TrialOutcome> outcomes(config.trials);
    parallel_for(config.trials, [&](std::size_t t) {
        const auto family = random_family(config.seed, t, config.n_max);
        const double p = config.p_set[t % config.p_set.size()];
        double a = 0.0;
        double b = 0.0;
        for (const auto& d : family) {
            a += d.mean();
            b += d.moment(p);
        }
        TrialOutcome& o = outcomes[t];
        o.p = p;
        o.n = family.size();
        o.exact = exact_sum_moment(family, p).value;
        o.rosenthal = rosenthal_bound(p, b, a);
        o.extremal = schechtman_extremal(ExtremalProblem(a, b, p));
    });

    InequalityReport report;
    report.trials = config.trials;
    for (std::size_t t = 0; t < outcomes.size(); ++t) {
        const auto& o = outcomes[t];
        const double r1 = o.exact / o.rosenthal;
        const double r2 = o.exact / o.extremal;
        report.max_rosenthal_ratio = std::max(report.max_rosenthal_ratio, r1);
        report.max_extremal_ratio = std::max(report.max_extremal_ratio, r2);
        if (r1 > 1.0 + config.slack) {
            ++report.rosenthal_violations;
            report.violations.push_back({t, o.p, o.n, o.exact, o.rosenthal, "rosenthal"});
        }
        if (r2 > 1.0 + config.slack) {
            ++report.extremal_violations;
            report.violations.push_back({t, o.p, o.n, o.exact, o.extremal, "extremal"});
        }
    }
    return report;
}

double extremal_tightness_ratio(double p, double mu, std::size_t n) {
    if (n < 1 || n > 20) throw DomainError("n must lie in [1, 20]");
    if (!(mu > 0.0 && mu < static_cast<double>(n))) throw DomainError("need 0 < mu < n");
    const double q = mu / static_cast<double>(n);
    const std::vector<DiscreteDist> family(n, DiscreteDist({{0.0, 1.0 - q}, {1.0, q}}));
    const double exact = exact_sum_moment(family, p).value;
    // With unit atoms: a = b = mu, so the extremal mu is mu itself.
    return exact / schechtman_extremal(ExtremalProblem(mu, mu, p));
}

}  // namespace bellbound
