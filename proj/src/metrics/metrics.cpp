#include "rebalance/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "rebalance/error.hpp"

namespace rebalance {

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t t = 0;
    for (auto c : counts_) t += c;
    return t;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t i) const {
    std::uint64_t t = 0;
    for (std::size_t j = 0; j < classes_; ++j) t += (*this)(i, j);
    return t;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t j) const {
    std::uint64_t t = 0;
    for (std::size_t i = 0; i < classes_; ++i) t += (*this)(i, j);
    return t;
}

ConfusionMatrix ConfusionMatrix::from_rows(const std::vector<std::vector<std::uint64_t>>& rows) {
    ConfusionMatrix cm(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) throw DataError("confusion matrix must be square");
        for (std::size_t j = 0; j < rows.size(); ++j) cm(i, j) = rows[i][j];
    }
    return cm;
}

ConfusionMatrix confusion(std::span<const Label> truth, std::span<const Label> predicted, std::size_t classes) {
    if (truth.size() != predicted.size()) throw DataError("truth and prediction lengths differ");
    ConfusionMatrix cm(classes);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const Label t = truth[i];
        const Label p = predicted[i];
        if (t < 0 || p < 0 || static_cast<std::size_t>(t) >= classes || static_cast<std::size_t>(p) >= classes) {
            throw DataError("label out of range at position " + std::to_string(i));
        }
        ++cm(static_cast<std::size_t>(t), static_cast<std::size_t>(p));
    }
    return cm;
}

ConfusionMatrix confusion(std::span<const Label> truth, std::span<const Label> predicted) {
    Label top = -1;
    for (Label l : truth) top = std::max(top, l);
    for (Label l : predicted) top = std::max(top, l);
    return confusion(truth, predicted, static_cast<std::size_t>(top + 1));
}

MetricReport evaluate(const ConfusionMatrix& cm, double beta) {
    const std::size_t c = cm.classes();
    const auto total = static_cast<double>(cm.total());
    if (c == 0 || total == 0.0) throw DataError("empty confusion matrix");
    auto ratio = [](double num, double den) { return den > 0.0 ? num / den : 0.0; };

    MetricReport r;
    r.beta = beta;
    r.per_class.resize(c);
    const double b2 = beta * beta;
    double log_recall = 0.0;
    bool zero_recall = false;
    for (std::size_t i = 0; i < c; ++i) {
        const auto tp = static_cast<double>(cm(i, i));
        const auto row = static_cast<double>(cm.row_sum(i));
        const auto col = static_cast<double>(cm.col_sum(i));
        const double fn = row - tp;
        const double fp = col - tp;
        const double tn = total - tp - fn - fp;
        auto& m = r.per_class[i];
        m.precision = ratio(tp, tp + fp);
        m.recall = ratio(tp, tp + fn);
        m.f_beta = ratio((1.0 + b2) * m.precision * m.recall, b2 * m.precision + m.recall);
        m.accuracy = (tp + tn) / total;
        r.av_acc += m.accuracy;
        r.av_fb += m.f_beta;
        r.cba += ratio(tp, std::max(row, col));
        if (m.recall > 0.0) {
            log_recall += std::log(m.recall);
        } else {
            zero_recall = true;
        }
    }
    const auto cd = static_cast<double>(c);
    r.av_acc /= cd;
    r.av_fb /= cd;
    r.cba /= cd;
    r.m_avg = zero_recall ? 0.0 : std::exp(log_recall / cd);
    return r;
}

}  // namespace rebalance
