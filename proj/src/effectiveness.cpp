#include "seirim/effectiveness.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "seirim/errors.hpp"

namespace seirim {

std::vector<EfficacyCombination> builtin_combinations()
{
    return {
        {0.0, 0.0, 0.0, 0.0, 0.0, 0.0}, // 1
        {0.0, 0.0, 0.3, 0.3, 0.3, 0.3}, // 2
        {0.0, 0.0, 0.3, 0.6, 0.3, 0.6}, // 3
        {0.0, 0.0, 0.6, 0.6, 0.6, 0.6}, // 4
        {0.0, 0.0, 0.9, 0.6, 0.9, 0.6}, // 5
        {0.3, 0.3, 0.3, 0.3, 0.3, 0.3}, // 6
        {0.3, 0.3, 0.6, 0.3, 0.6, 0.3}, // 7
        {0.3, 0.3, 0.6, 0.6, 0.6, 0.6}, // 8
        {0.3, 0.3, 0.9, 0.6, 0.9, 0.6}, // 9
        {0.6, 0.6, 0.3, 0.3, 0.3, 0.3}, // 10
        {0.6, 0.6, 0.6, 0.3, 0.6, 0.3}, // 11
        {0.6, 0.6, 0.6, 0.6, 0.6, 0.6}, // 12
        {0.6, 0.6, 0.9, 0.6, 0.9, 0.6}, // 13
        {0.9, 0.9, 0.3, 0.3, 0.3, 0.3}, // 14
        {0.9, 0.9, 0.6, 0.3, 0.6, 0.3}, // 15
        {0.9, 0.9, 0.6, 0.6, 0.6, 0.6}, // 16
        {0.9, 0.9, 0.9, 0.6, 0.9, 0.6}, // 17
    };
}

std::vector<EfficacyCombination> load_combinations(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open combinations file: " + path.string());
    std::vector<EfficacyCombination> combos;
    std::string line;
    bool header_seen = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        if (!header_seen) {
            if (line != "eps11,eps12,eps21,eps22,eps31,eps32")
                throw ValidationError("combinations file must start with the header "
                                      "eps11,eps12,eps21,eps22,eps31,eps32");
            header_seen = true;
            continue;
        }
        std::istringstream row(line);
        double values[6];
        char comma = ',';
        for (int i = 0; i < 6; ++i) {
            if (!(row >> values[i]) || (i < 5 && !(row >> comma && comma == ','))) {
                throw ValidationError("combinations file line " + std::to_string(lineno) +
                                      ": expected six comma-separated efficacies");
            }
        }
        std::string trailing;
        if (row >> trailing)
            throw ValidationError("combinations file line " + std::to_string(lineno) +
                                  ": trailing content");
        EfficacyCombination combo{values[0], values[1], values[2], values[3], values[4], values[5]};
        combo.validate();
        combos.push_back(combo);
    }
    if (combos.empty())
        throw ValidationError("combinations file has no rows: " + path.string());
    return combos;
}

namespace {

std::vector<EffectivenessRow> unranked_rows(const ModelParameters& params,
                                            const DfeWeights& weights,
                                            const std::vector<EfficacyCombination>& combos)
{
    const double r0 = effective_r0(params, weights, EfficacyCombination::zero());
    if (!(r0 > 0.0))
        throw NumericError("effectiveness: reduction undefined, baseline reproduction number is zero");
    std::vector<EffectivenessRow> rows;
    rows.reserve(combos.size());
    int id = 1;
    for (const auto& combo : combos) {
        EffectivenessRow row;
        row.id = id++;
        row.combo = combo;
        row.r_e = effective_r0(params, weights, combo);
        row.pr = 100.0 * (r0 - row.r_e) / r0;
        rows.push_back(row);
    }
    return rows;
}

} // namespace

std::vector<EffectivenessRow> effectiveness_table(const ModelParameters& params,
                                                  const DfeWeights& weights,
                                                  const std::vector<EfficacyCombination>& combos)
{
    auto rows = unranked_rows(params, weights, combos);

    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (rows[a].pr != rows[b].pr)
            return rows[a].pr < rows[b].pr;
        return rows[a].id < rows[b].id;
    });
    for (std::size_t rank = 0; rank < order.size(); ++rank)
        rows[order[rank]].ce_rank = static_cast<int>(rank) + 1;
    return rows;
}

RateModifiers rate_modifiers(const EfficacyCombination& eff)
{
    eff.validate();
    RateModifiers mods;
    mods.k_u = 1.0 - eff.eps11;
    mods.k_r = 1.0 - eff.eps12;
    mods.gamma_u = (1.0 + eff.eps21) * (1.0 + eff.eps31);
    mods.gamma_r = (1.0 + eff.eps22) * (1.0 + eff.eps32);
    return mods;
}

} // namespace seirim
