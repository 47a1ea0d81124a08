#include "causalmix/metrics.hpp"

#include "causalmix/error.hpp"

namespace causalmix {

namespace {
double ratio(std::size_t num, std::size_t den) {
    return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
}
}  // namespace

Metrics score(const PatternGraph& learned, const Dag& truth) {
    if (learned.vertices() != truth.names()) throw GraphError("score: learned pattern and truth have different vertices");
    Metrics m;
    const Skeleton true_skeleton = truth.skeleton();
    for (const auto& e : learned.skeleton()) {
        if (true_skeleton.contains(e))
            ++m.tp;
        else
            ++m.fp;
    }
    m.fn = true_skeleton.size() - m.tp;

    const std::set<Arrow> learned_arrows = learned.arrows();
    const std::set<Arrow> true_arrows = pattern_of(truth).arrows();
    for (const Arrow& a : learned_arrows) {
        if (truth.has_edge(a.from, a.to))
            ++m.tp1;
        else
            ++m.fp1;
    }
    for (const Arrow& a : true_arrows)
        if (!learned_arrows.contains(a)) ++m.fn1;

    m.tpr = ratio(m.tp, m.tp + m.fp);
    m.tdr = ratio(m.tp, m.tp + m.fn);
    m.d_tpr = ratio(m.tp1, m.tp1 + m.fp1);
    m.d_tdr = ratio(m.tp1, m.tp1 + m.fn1);
    return m;
}

}  // namespace causalmix
