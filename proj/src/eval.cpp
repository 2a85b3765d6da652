#include "deep/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <thread>

#include "deep/decision.hpp"
#include "deep/rng.hpp"

namespace deep {

std::string to_string(HomogeneityLabel l) {
    switch (l) {
        case HomogeneityLabel::consistent: return "consistent";
        case HomogeneityLabel::inconsistent: return "inconsistent";
        case HomogeneityLabel::uncertain: return "uncertain";
    }
    return "?";
}

HomogeneityReport homogeneity(const PatternSet& set, const BinaryDataset& d,
                              const SignTestConfig& cfg) {
    const auto groups = d.group_cross_tables(set.descriptor_vars);

    HomogeneityReport report;
    report.labels.reserve(set.patterns.size());
    for (const Pattern& p : set.patterns) {
        std::vector<std::size_t> wild;
        for (std::size_t i = 0; i < p.values.size(); ++i) {
            if (p.values[i] == DescriptorValue::star || p.values[i] == DescriptorValue::cross)
                wild.push_back(i);
        }
        bool all_same = true, any_opposite = false;
        const std::size_t combos = std::size_t{1} << wild.size();
        std::vector<std::uint8_t> key(p.values.size());
        for (std::size_t c = 0; c < combos; ++c) {
            for (std::size_t i = 0; i < p.values.size(); ++i)
                key[i] = p.values[i] == DescriptorValue::one ? 1 : 0;
            for (std::size_t b = 0; b < wild.size(); ++b) key[wild[b]] = (c >> b) & 1u;

            Sign sub = Sign::uncertain;  // expansions unobserved in d stay '?'
            const auto it = groups.find(key);
            if (it != groups.end()) sub = sign_of_cate(it->second, cfg);

            all_same &= sub == p.sign;
            const bool opposite = (p.sign == Sign::positive && sub == Sign::negative) ||
                                  (p.sign == Sign::negative && sub == Sign::positive);
            any_opposite |= opposite;
        }
        // Consistent means every expansion carries the pattern's own sign;
        // an opposite +/- expansion is inconsistent; anything else (some
        // expansion '?', or a signed expansion under a '?' pattern) is
        // uncertain.
        HomogeneityLabel label = HomogeneityLabel::uncertain;
        if (any_opposite)
            label = HomogeneityLabel::inconsistent;
        else if (all_same)
            label = HomogeneityLabel::consistent;
        report.labels.push_back(label);
    }

    const double total = report.labels.empty() ? 1.0 : static_cast<double>(report.labels.size());
    for (HomogeneityLabel l : report.labels) {
        if (l == HomogeneityLabel::consistent) report.fraction_consistent += 1.0 / total;
        if (l == HomogeneityLabel::inconsistent) report.fraction_inconsistent += 1.0 / total;
        if (l == HomogeneityLabel::uncertain) report.fraction_uncertain += 1.0 / total;
    }
    return report;
}

double coverage(const PatternSet& set, const BinaryDataset& d) {
    const auto groups = d.group_cross_tables(set.descriptor_vars);
    std::uint64_t covered = 0;
    for (const auto& [key, table] : groups) {
        const Recommendation rec = match(key, set);
        if (rec.pattern_index && set.patterns[*rec.pattern_index].sign != Sign::uncertain)
            covered += table.total();
    }
    return static_cast<double>(covered) / static_cast<double>(d.n());
}

bool ground_truth_agrees(Sign sign, double difference) {
    return (difference > 0.0 && sign == Sign::positive) ||
           (difference < 0.0 && sign == Sign::negative);
}

double stratified_ate(const BinaryDataset& d, const std::vector<int>& vars) {
    double effect = 0.0, mass = 0.0;
    for (const auto& [key, table] : d.group_cross_tables(vars)) {
        if (table.treated() == 0 || table.control() == 0) continue;
        const double p = static_cast<double>(table.total()) / static_cast<double>(d.n());
        effect += cate(table) * p;
        mass += p;
    }
    if (mass == 0.0) throw DataError("stratified_ate: no stratum has both arms");
    return effect / mass;
}

namespace {

BinaryDataset subset_rows(const BinaryDataset& d, const std::vector<std::size_t>& rows) {
    std::vector<BitColumn> columns(d.n_variables());
    for (std::size_t c = 0; c < d.n_variables(); ++c) {
        BitColumn col(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            col.set(i, d.value(rows[i], static_cast<int>(c)));
        columns[c] = std::move(col);
    }
    return BinaryDataset::from_columns(d.variable_names(), std::move(columns),
                                       d.name(d.treatment_index()), d.name(d.outcome_index()));
}

struct RepOutcome {
    std::uint64_t tp = 0, fp = 0, skipped = 0;
};

RepOutcome run_cv_rep(const BinaryDataset& d, const CvConfig& cfg, int rep) {
    Rng rng = Rng(cfg.seed).split(static_cast<std::uint64_t>(rep) + 1);

    // Stratified 2-fold split on (W, Y).
    const int w = d.treatment_index();
    const int y = d.outcome_index();
    std::vector<std::size_t> cells[4];
    for (std::size_t r = 0; r < d.n(); ++r) {
        const int cell = static_cast<int>(d.value(r, w)) * 2 + static_cast<int>(d.value(r, y));
        cells[cell].push_back(r);
    }
    std::vector<std::size_t> fold_of(d.n(), 0);
    for (auto& cell : cells) {
        for (std::size_t i = cell.size(); i > 1; --i) {
            const std::size_t j = rng.next_below(i);
            std::swap(cell[i - 1], cell[j]);
        }
        for (std::size_t i = 0; i < cell.size(); ++i) fold_of[cell[i]] = i % 2;
    }

    RepOutcome out;
    for (std::size_t test_fold = 0; test_fold < 2; ++test_fold) {
        std::vector<std::size_t> train_rows, test_rows;
        for (std::size_t r = 0; r < d.n(); ++r) {
            (fold_of[r] == test_fold ? test_rows : train_rows).push_back(r);
        }
        if (train_rows.empty() || test_rows.empty()) continue;
        const BinaryDataset train = subset_rows(d, train_rows);
        const DiscoveryResult trained = discover(train, cfg.discovery);
        const auto& vars = trained.patterns.descriptor_vars;

        for (const Pattern& p : trained.patterns.patterns) {
            if (p.sign == Sign::uncertain) continue;
            // Approximal ground truth: outcome-mean difference between the
            // treated and control test samples the pattern describes.
            std::uint64_t n1 = 0, n0 = 0, y1 = 0, y0 = 0;
            for (std::size_t r : test_rows) {
                bool matches = true;
                for (std::size_t i = 0; i < vars.size(); ++i) {
                    const DescriptorValue v = p.values[i];
                    if (v == DescriptorValue::star || v == DescriptorValue::cross) continue;
                    if (d.value(r, vars[i]) != (v == DescriptorValue::one)) {
                        matches = false;
                        break;
                    }
                }
                if (!matches) continue;
                if (d.value(r, w)) {
                    ++n1;
                    y1 += d.value(r, y);
                } else {
                    ++n0;
                    y0 += d.value(r, y);
                }
            }
            if (n1 == 0 || n0 == 0) {
                ++out.skipped;
                continue;
            }
            const double diff = static_cast<double>(y1) / static_cast<double>(n1) -
                                static_cast<double>(y0) / static_cast<double>(n0);
            if (ground_truth_agrees(p.sign, diff))
                ++out.tp;
            else
                ++out.fp;  // a zero difference contradicts any signed claim
        }
    }
    return out;
}

}  // namespace

CvReport cross_validate(const BinaryDataset& d, const CvConfig& cfg) {
    CvReport report;
    report.runs = cfg.runs;
    report.folds = 2;
    report.seed = cfg.seed;
    report.per_run_accuracy.resize(cfg.runs);

    std::vector<RepOutcome> outcomes(cfg.runs);
    const int jobs = std::max(1, cfg.jobs);
    if (jobs == 1) {
        for (int rep = 0; rep < cfg.runs; ++rep) outcomes[rep] = run_cv_rep(d, cfg, rep);
    } else {
        std::vector<std::thread> workers;
        std::atomic<int> next{0};
        for (int t = 0; t < jobs; ++t) {
            workers.emplace_back([&] {
                for (int rep = next.fetch_add(1); rep < cfg.runs; rep = next.fetch_add(1))
                    outcomes[rep] = run_cv_rep(d, cfg, rep);
            });
        }
        for (auto& th : workers) th.join();
    }

    double sum = 0.0, sumsq = 0.0;
    int defined = 0;
    for (int rep = 0; rep < cfg.runs; ++rep) {
        const RepOutcome& o = outcomes[rep];
        report.tp += o.tp;
        report.fp += o.fp;
        report.skipped += o.skipped;
        if (o.tp + o.fp > 0) {
            const double acc =
                static_cast<double>(o.tp) / static_cast<double>(o.tp + o.fp);
            report.per_run_accuracy[rep] = acc;
            sum += acc;
            sumsq += acc * acc;
            ++defined;
        }
    }
    if (defined > 0) {
        const double mean = sum / defined;
        report.accuracy_mean = mean;
        report.accuracy_sd = std::sqrt(std::max(0.0, sumsq / defined - mean * mean));
    }
    return report;
}

std::vector<SweepCell> parameter_sweep(const BinaryDataset& d, const std::vector<double>& alphas,
                                       const std::vector<double>& gammas, const CvConfig& base) {
    if (alphas.empty() || gammas.empty())
        throw DataError("parameter sweep needs non-empty grids");
    std::vector<SweepCell> cells;
    for (double alpha : alphas) {
        for (double gamma : gammas) {
            CvConfig cfg = base;
            cfg.discovery.alpha = alpha;
            cfg.discovery.gamma = gamma;
            SweepCell cell;
            cell.alpha = alpha;
            cell.gamma = gamma;
            cell.report = cross_validate(d, cfg);
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

void write_cv_report(std::ostream& os, const CvReport& report) {
    os << "runs: " << report.runs << "\n";
    os << "folds: " << report.folds << "\n";
    os << "seed: " << report.seed << "\n";
    os << "tp: " << report.tp << "\n";
    os << "fp: " << report.fp << "\n";
    os << "skipped: " << report.skipped << "\n";
    if (report.accuracy_mean) {
        os << std::fixed << std::setprecision(4);
        os << "accuracy_mean: " << *report.accuracy_mean << "\n";
        os << "accuracy_sd: " << *report.accuracy_sd << "\n";
        os.unsetf(std::ios::fixed);
    } else {
        os << "accuracy_mean: -\n";
        os << "accuracy_sd: -\n";
    }
    os << "per_run:";
    for (const auto& acc : report.per_run_accuracy) {
        if (acc)
            os << ' ' << std::setprecision(4) << *acc;
        else
            os << " -";
    }
    os << "\n";
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepCell>& cells) {
    os << "alpha,gamma,accuracy_mean,accuracy_sd,tp,fp,skipped,seed\n";
    for (const SweepCell& c : cells) {
        os << c.alpha << ',' << c.gamma << ',';
        if (c.report.accuracy_mean) {
            os << std::setprecision(6) << *c.report.accuracy_mean << ','
               << *c.report.accuracy_sd;
        } else {
            os << "-,-";
        }
        os << ',' << c.report.tp << ',' << c.report.fp << ',' << c.report.skipped << ','
           << c.report.seed << '\n';
    }
}

}  // namespace deep
