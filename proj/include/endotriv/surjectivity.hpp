#pragma once

#include "borel_smith.hpp"
#include "burnside.hpp"
#include "complex.hpp"

#include <optional>
#include <string>
#include <vector>

namespace endotriv {

struct UnitPreimage {
    MarkVector unit_marks;
    std::optional<SuperclassFn> preimage; // f in CF_b with exponential(f) = marks
    bool via_endotrivial = false;         // f is a 0/1 sum of h-marks of endotrivial C_Q
    bool constructed = false;             // a complex was built for f
    bool endotrivial = false;             // the built complex passes the dim-1 test
    bool lefschetz_matches = false;       // marks(Lambda(C)) = unit marks (exact)
    bool sign_matches = false;            // signs of marks(Lambda(C)) = unit marks
    std::string skipped;                  // why construction did not run
};

struct SurjectivityReport {
    bool pass = false;
    std::vector<std::size_t> endotrivial_generators; // poset positions Q with C_Q endotrivial
    std::vector<UnitPreimage> units;

    std::size_t constructed_count() const
    {
        std::size_t n = 0;
        for (const auto& u : units)
            n += u.constructed;
        return n;
    }
    std::size_t exact_count() const
    {
        std::size_t n = 0;
        for (const auto& u : units)
            n += u.lefschetz_matches;
        return n;
    }
};

namespace detail {

inline std::vector<std::uint8_t> sign_bits(const MarkVector& m)
{
    std::vector<std::uint8_t> bits;
    for (const auto& x : m.marks)
        bits.push_back(x < 0 ? 1 : 0);
    return bits;
}

inline SuperclassFn combine_columns(std::uint64_t p, const IntMatrix& cols, const std::vector<std::uint8_t>& pick)
{
    SuperclassFn f{p, IntVector(cols.rows(), 0)};
    for (std::size_t j = 0; j < pick.size(); ++j)
        if (pick[j])
            for (std::size_t i = 0; i < cols.rows(); ++i)
                f.values[i] += cols(i, j);
    return f;
}

} // namespace detail

/// Every unit of B(G) is hit by some f in CF_b (F_2 solve). The preimage is
/// taken from 0/1 sums of omega_Q over Q with C_Q endotrivial when possible;
/// the product of those C_Q is then endotrivial and Lambda must equal the unit
/// exactly. Otherwise f comes from the CF_b basis; the product need not be
/// endotrivial (no cap extraction), and only the signs of Lambda's marks,
/// (-1)^{h(P)}, are comparable with the unit.
inline SurjectivityReport lefschetz_surjectivity_check(const SubgroupLattice& lat, const PSubposet& poset,
                                                       const BuildOptions& build = {},
                                                       const UnitLimits& limits = {})
{
    detail::require_p_group_poset(lat, poset);
    const auto table = table_of_marks(lat);
    const auto basis = cfb_lattice(lat, poset).basis();
    const OmegaMatrix w(poset);

    SurjectivityReport rep;
    for (std::size_t q = 0; q < poset.size(); ++q) {
        auto cq = build_CQ(lat, poset.p, lat.class_rep(poset.classes[q]));
        if (verify_endotrivial(h_marks(cq, lat, poset)))
            rep.endotrivial_generators.push_back(q);
    }
    IntMatrix endo(poset.size(), rep.endotrivial_generators.size());
    for (std::size_t j = 0; j < rep.endotrivial_generators.size(); ++j) {
        const auto col = omega(w, rep.endotrivial_generators[j]);
        for (std::size_t i = 0; i < poset.size(); ++i)
            endo(i, j) = col[i];
    }

    rep.pass = true;
    for (const auto& u : units(table, limits)) {
        UnitPreimage up;
        up.unit_marks = marks_of(table, u);
        const auto target = detail::sign_bits(up.unit_marks);
        if (auto sol = solve_mod2(endo, target)) {
            up.preimage = detail::combine_columns(poset.p, endo, *sol);
            up.via_endotrivial = true;
        } else if (auto sol2 = solve_mod2(basis, target)) {
            up.preimage = detail::combine_columns(poset.p, basis, *sol2);
        } else {
            rep.pass = false;
            rep.units.push_back(std::move(up));
            continue;
        }
        const auto& f = *up.preimage;
        if (exponential(f) != up.unit_marks)
            rep.pass = false;
        try {
            auto c = build_from_hmarks(lat, poset, f, build);
            up.constructed = true;
            up.endotrivial = verify_endotrivial(h_marks(c, lat, poset));
            const auto lm = marks_of(table, lefschetz(c, lat));
            up.lefschetz_matches = lm == up.unit_marks;
            up.sign_matches = true;
            for (std::size_t i = 0; i < lm.marks.size(); ++i)
                if ((lm.marks[i] < 0) != (up.unit_marks.marks[i] < 0) || lm.marks[i] == 0)
                    up.sign_matches = false;
            // an endotrivial product must hit the unit on the nose
            if ((up.via_endotrivial && !up.endotrivial) || (up.endotrivial && !up.lefschetz_matches) ||
                !up.sign_matches)
                rep.pass = false;
        } catch (const BudgetExceeded& e) {
            up.skipped = e.what();
        }
        rep.units.push_back(std::move(up));
    }
    return rep;
}

} // namespace endotriv
