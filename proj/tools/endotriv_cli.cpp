// endotriv_cli: batch front end. One JSON document per run on stdout.
// Exit codes: 0 ok, 2 validation error, 3 budget guard, 1 anything else.
#include <endotriv/endotriv.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace endotriv;
using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kSchema = "endotriv/1";

Json num(const Integer& x)
{
    // plain JSON numbers while they fit, decimal strings beyond that
    if (x >= std::numeric_limits<long long>::min() && x <= std::numeric_limits<long long>::max())
        return x.convert_to<long long>();
    return x.str();
}

Json vec(const IntVector& v)
{
    Json a = Json::array();
    for (const auto& x : v)
        a.push_back(num(x));
    return a;
}

Json columns(const IntMatrix& m)
{
    Json a = Json::array();
    for (const auto& c : m.columns())
        a.push_back(vec(c));
    return a;
}

Json rows(const IntMatrix& m)
{
    Json a = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        a.push_back(vec(m.row(i)));
    return a;
}

Json fp_rows(const FpMatrix& m)
{
    Json a = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json r = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            r.push_back(m(i, j));
        a.push_back(r);
    }
    return a;
}

Json invariants(const AbelianInvariants& a)
{
    return Json{{"free_rank", a.free_rank}, {"torsion", vec(a.torsion)}, {"text", a.to_string()}};
}

Json perm(const Perm& p)
{
    Json a = Json::array();
    for (auto x : p)
        a.push_back(x);
    return a;
}

Json subgroup_gens(const PermGroup& g, const Subgroup& s)
{
    Json a = Json::array();
    for (auto x : s.generators)
        a.push_back(perm(g.element(x)));
    return a;
}

/// A group with its lattice and p-subposet.
struct Loaded {
    std::string source;
    std::shared_ptr<const SubgroupLattice> lat;
    PSubposet poset;

    const SubgroupLattice& lattice() const { return *lat; }
    PosetView view() const { return {*lat, poset}; }
};

Loaded load(std::shared_ptr<const PermGroup> g, std::uint64_t p, std::string source)
{
    if (!is_prime(p))
        throw ValidationError("p = " + std::to_string(p) + " is not a prime");
    Loaded l{std::move(source), std::make_shared<const SubgroupLattice>(std::move(g)), {}};
    l.poset = l.lat->p_subposet(p);
    return l;
}

/// Ordering legend of the p-subgroup classes: every vector indexed by
/// "position" uses this order.
Json poset_legend(const Loaded& l)
{
    Json a = Json::array();
    const auto& lat = l.lattice();
    for (std::size_t i = 0; i < l.poset.size(); ++i) {
        const auto c = l.poset.classes[i];
        const auto s = lat.class_rep(c);
        a.push_back(Json{{"position", i},
                         {"lattice_class", c},
                         {"order", lat.subgroup(s).order()},
                         {"class_size", lat.class_members(c).size()},
                         {"cyclic", lat.is_cyclic(s)},
                         {"generators", subgroup_gens(lat.group(), lat.subgroup(s))}});
    }
    return a;
}

/// Legend over all subgroup classes (Burnside-ring indexing).
Json class_legend(const SubgroupLattice& lat)
{
    Json a = Json::array();
    for (std::size_t c = 0; c < lat.class_count(); ++c) {
        const auto s = lat.class_rep(c);
        a.push_back(Json{{"class", c},
                         {"order", lat.subgroup(s).order()},
                         {"class_size", lat.class_members(c).size()},
                         {"generators", subgroup_gens(lat.group(), lat.subgroup(s))}});
    }
    return a;
}

Json header(const std::string& command, const Loaded& l)
{
    Json gens = Json::array();
    for (const auto& g : l.lattice().group().generators())
        gens.push_back(perm(g));
    return Json{{"schema", kSchema},
                {"command", command},
                {"group", Json{{"source", l.source},
                               {"degree", l.lattice().group().degree()},
                               {"order", l.lattice().group().order()},
                               {"generators", gens}}},
                {"p", l.poset.p},
                {"legend", poset_legend(l)}};
}

SuperclassFn parse_fn(const std::string& text, const Loaded& l, const char* what)
{
    SuperclassFn f{l.poset.p, {}};
    std::stringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        try {
            std::size_t pos = 0;
            long long v = std::stoll(tok, &pos);
            if (pos != tok.size())
                throw std::invalid_argument(tok);
            f.values.push_back(v);
        } catch (const std::exception&) {
            throw ValidationError(std::string(what) + ": '" + tok + "' is not an integer");
        }
    }
    if (f.size() != l.poset.size())
        throw ValidationError(std::string(what) + ": expected " + std::to_string(l.poset.size()) +
                              " values (one per p-subgroup class), got " + std::to_string(f.size()));
    return f;
}

Json condition_rows(const ConditionSystem& sys, const SubgroupLattice& lat)
{
    Json a = Json::array();
    for (const auto& r : sys.rows) {
        Json src = Json::array();
        for (auto s : r.source)
            src.push_back(Json{{"subgroup_order", lat.subgroup(s).order()}, {"lattice_class", lat.class_of(s)}});
        a.push_back(Json{{"kind", ConditionRow::kind_name(r.kind)},
                         {"row", vec(r.row)},
                         {"modulus", num(r.modulus)},
                         {"source", src},
                         {"multiplicity", r.multiplicity}});
    }
    return a;
}

Json lattice_json(const IntegerLattice& l)
{
    return Json{{"basis", columns(l.basis())},
                {"rank", l.rank()},
                {"index", l.rank() == l.ambient_rank() ? num(l.index()) : Json(nullptr)}};
}

Json report_json(const HMarkReport& r)
{
    Json a = Json::array();
    for (std::size_t i = 0; i < r.classes.size(); ++i) {
        const auto& c = r.classes[i];
        Json hom = Json::array();
        for (auto [deg, dim] : c.homology)
            hom.push_back(Json{{"degree", deg}, {"dim", dim}});
        a.push_back(Json{{"position", i},
                         {"sylow", c.sylow},
                         {"homology", hom},
                         {"concentrated", c.concentrated},
                         {"h_mark", c.h_mark ? Json(*c.h_mark) : Json(nullptr)},
                         {"dim", c.h_dim}});
    }
    return a;
}

Json complex_json(const PermComplex& c)
{
    Json terms = Json::array();
    for (int deg : c.degrees()) {
        const auto& t = c.term(deg);
        Json images = Json::array();
        for (std::size_t k = 0; k < c.group().generators().size(); ++k)
            images.push_back(t.generator_image(k));
        terms.push_back(Json{{"degree", deg}, {"points", t.size()}, {"generator_images", images}});
    }
    Json diffs = Json::array();
    for (int deg : c.degrees())
        if (auto d = c.differential_ptr(deg))
            diffs.push_back(Json{{"degree", deg}, {"matrix", fp_rows(*d)}});
    return Json{{"terms", terms}, {"differentials", diffs}};
}

void emit(const Json& doc) { std::cout << doc.dump(2) << "\n"; }

void tsv_rows(const std::vector<std::string>& head, const std::vector<std::vector<std::string>>& body)
{
    for (std::size_t i = 0; i < head.size(); ++i)
        std::cout << (i ? "\t" : "") << head[i];
    std::cout << "\n";
    for (const auto& r : body) {
        for (std::size_t i = 0; i < r.size(); ++i)
            std::cout << (i ? "\t" : "") << r[i];
        std::cout << "\n";
    }
}

std::string joined(const IntVector& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + v[i].str();
    return s;
}

// ---- commands ----

void cmd_lattice(const Loaded& l)
{
    const auto& lat = l.lattice();
    Json doc = header("lattice", l);
    Json classes = Json::array();
    for (std::size_t c = 0; c < lat.class_count(); ++c) {
        const auto s = lat.class_rep(c);
        classes.push_back(Json{{"class", c},
                               {"order", lat.subgroup(s).order()},
                               {"class_size", lat.class_members(c).size()},
                               {"normalizer_order", lat.subgroup(lat.normalizer(s)).order()},
                               {"p_subgroup", lat.is_p_subgroup(s, l.poset.p)},
                               {"generators", subgroup_gens(lat.group(), lat.subgroup(s))}});
    }
    doc["subgroup_count"] = lat.size();
    doc["classes"] = classes;
    Json leq = Json::array();
    for (const auto& r : l.poset.leq) {
        Json row = Json::array();
        for (bool b : r)
            row.push_back(b ? 1 : 0);
        leq.push_back(row);
    }
    doc["subconjugacy"] = leq;
    const OmegaMatrix w(l.poset);
    doc["mobius"] = rows(w.inverse());
    emit(doc);
}

void cmd_cfb(const Loaded& l, bool artin, bool tsv)
{
    const auto& lat = l.lattice();
    auto sys = borel_smith_system(lat, l.poset);
    if (artin)
        sys = sys.merged_with(artin_system(lat, l.poset));
    const auto lattice = condition_lattice(sys);
    if (tsv) {
        std::vector<std::vector<std::string>> body;
        for (const auto& r : sys.rows)
            body.push_back({ConditionRow::kind_name(r.kind), joined(r.row), r.modulus.str(), std::to_string(r.multiplicity)});
        tsv_rows({"kind", "row", "modulus", "multiplicity"}, body);
        return;
    }
    Json doc = header("cfb", l);
    doc["artin"] = artin;
    doc["conditions"] = condition_rows(sys, lat);
    doc["lattice"] = lattice_json(lattice);
    emit(doc);
}

void cmd_dade(const Loaded& l)
{
    Json doc = header("dade", l);
    doc["cfb"] = lattice_json(cfb_lattice(l.lattice(), l.poset));
    doc["cfba"] = lattice_json(cfba_lattice(l.lattice(), l.poset));
    doc["dade_omega"] = invariants(dade_omega_invariants(l.lattice(), l.poset));
    emit(doc);
}

void cmd_classify(const Loaded& l)
{
    const auto inv = classify_endotrivial_group(l.lattice(), l.poset);
    Json doc = header("classify", l);
    doc["free_rank"] = inv.free_rank;
    doc["torsion"] = vec(inv.torsion);
    doc["hom_to_units"] = invariants(hom_to_units_order(l.lattice().group(), l.poset.p));
    emit(doc);
}

void cmd_complex(const Loaded& l, const std::string& hmarks, const BuildOptions& opts, bool full)
{
    const auto f = parse_fn(hmarks, l, "--hmarks");
    const OmegaMatrix w(l.poset);
    const auto b = mobius_inversion(w, f);
    auto c = build_from_hmarks(l.lattice(), l.poset, f, opts);
    const auto rep = h_marks(c, l.lattice(), l.poset);

    Json doc = header("complex", l);
    doc["hmarks"] = vec(f.values);
    doc["omega_coefficients"] = vec(b);
    doc["borel_smith"] = check(f, borel_smith_system(l.lattice(), l.poset)).pass;
    doc["reduced"] = opts.reduce;
    Json dims = Json::array();
    for (auto [deg, n] : c.term_dims())
        dims.push_back(Json{{"degree", deg}, {"dim", n}});
    doc["term_dims"] = dims;
    doc["total_dim"] = c.total_dim();
    doc["h_mark_report"] = report_json(rep);
    doc["endotrivial"] = verify_endotrivial(rep);
    doc["endosplit_trivial_VFG"] = verify_endosplit_trivial_VFG(rep);
    if (is_p_group(l.lattice().group(), l.poset.p)) {
        const auto table = table_of_marks(l.lattice());
        const auto lam = lefschetz(c, l.lattice());
        doc["lefschetz"] = Json{{"coefficients", vec(lam.coeffs)},
                                {"marks", vec(marks_of(table, lam).marks)},
                                {"class_legend", class_legend(l.lattice())}};
    } else {
        doc["lefschetz"] = nullptr;
    }
    if (full)
        doc["complex"] = complex_json(c);
    emit(doc);
}

void cmd_burnside(const Loaded& l, const BuildOptions& opts, bool tsv)
{
    const auto& lat = l.lattice();
    if (!is_p_group(lat.group(), l.poset.p))
        throw ValidationError("burnside: the group is not a " + std::to_string(l.poset.p) + "-group");
    const auto table = table_of_marks(lat);
    if (tsv) {
        std::vector<std::vector<std::string>> body;
        for (std::size_t k = 0; k < table.rows(); ++k) {
            std::vector<std::string> r{std::to_string(k)};
            for (std::size_t h = 0; h < table.cols(); ++h)
                r.push_back(table(k, h).str());
            body.push_back(std::move(r));
        }
        std::vector<std::string> head{"K\\H"};
        for (std::size_t h = 0; h < table.cols(); ++h)
            head.push_back(std::to_string(h));
        tsv_rows(head, body);
        return;
    }
    Json doc = header("burnside", l);
    doc["class_legend"] = class_legend(lat);
    doc["table_of_marks"] = rows(table);
    Json us = Json::array();
    for (const auto& u : units(table))
        us.push_back(Json{{"coefficients", vec(u.coeffs)}, {"marks", vec(marks_of(table, u).marks)}});
    doc["units"] = us;
    doc["tornehave"] = tornehave_check(lat, l.poset).pass;
    const auto surj = lefschetz_surjectivity_check(lat, l.poset, opts);
    Json per = Json::array();
    for (const auto& u : surj.units) {
        per.push_back(Json{{"marks", vec(u.unit_marks.marks)},
                           {"preimage", u.preimage ? vec(u.preimage->values) : Json(nullptr)},
                           {"via_endotrivial", u.via_endotrivial},
                           {"constructed", u.constructed},
                           {"endotrivial", u.endotrivial},
                           {"lefschetz_matches", u.lefschetz_matches},
                           {"sign_matches", u.sign_matches},
                           {"skipped", u.skipped.empty() ? Json(nullptr) : Json(u.skipped)}});
    }
    doc["lefschetz_surjectivity"] = Json{{"pass", surj.pass}, {"units", per}};
    emit(doc);
}

/// Subgroup of g given by generator permutations of the same degree.
std::size_t subgroup_from_file(const SubgroupLattice& lat, const std::string& path)
{
    auto h = read_group_file(path);
    if (h.degree() != lat.group().degree())
        throw ValidationError(path + ": generators must act on the same points as the group");
    std::vector<PermGroup::Index> members;
    for (const auto& e : h.elements()) {
        auto idx = lat.group().index_of(e);
        if (!idx)
            throw ValidationError(path + ": element outside the group");
        members.push_back(*idx);
    }
    std::sort(members.begin(), members.end());
    auto s = lat.find_members(members);
    if (!s)
        throw ValidationError(path + ": not a subgroup");
    return *s;
}

void cmd_biset(const Loaded& g, const std::string& op, const std::string& sub_path, const std::string& fn_text)
{
    const auto& lat = g.lattice();
    const auto s = subgroup_from_file(lat, sub_path);
    const auto p = g.poset.p;
    Json doc = header("biset", g);
    doc["op"] = op;
    SuperclassFn out;
    Loaded other;
    if (op == "res" || op == "ind") {
        auto emb = subgroup_as_group(lat.group(), lat.subgroup(s));
        other = load(emb.group, p, sub_path);
        if (op == "res")
            out = res(g.view(), emb, other.view(), parse_fn(fn_text, g, "--f"));
        else
            out = ind(g.view(), emb, other.view(), parse_fn(fn_text, other, "--f"));
    } else if (op == "inf" || op == "def") {
        auto q = std::make_shared<const QuotientGroup>(lat, lat.whole(), s);
        other = load(q->group_ptr(), p, "quotient by " + sub_path);
        if (op == "inf")
            out = inf(g.view(), *q, other.view(), parse_fn(fn_text, other, "--f"));
        else
            out = def(g.view(), *q, other.view(), parse_fn(fn_text, g, "--f"));
    } else {
        throw ValidationError("biset: unknown operation '" + op + "' (res, inf, def, ind)");
    }
    const bool to_g = op == "ind" || op == "inf";
    const Loaded& target = to_g ? g : other;
    doc["other_group"] = Json{{"role", op == "res" || op == "ind" ? "subgroup" : "quotient"},
                              {"order", other.lattice().group().order()},
                              {"legend", poset_legend(other)}};
    doc["input_on"] = to_g ? "other_group" : "group";
    doc["output_on"] = to_g ? "group" : "other_group";
    doc["result"] = vec(out.values);
    doc["result_borel_smith"] = check(out, borel_smith_system(target.lattice(), target.poset)).pass;
    emit(doc);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Endotrivial complexes: lattices, Dade quotients, complexes, Burnside units"};
    app.require_subcommand(1);

    std::string group_file, builtin_spec, format = "json";
    std::uint64_t p = 0;
    std::size_t budget = BuildOptions{}.budget;
    std::size_t order_cap = GroupLimits{}.order_cap;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("group", group_file, "group file (degree line, then one generator per line)");
        sub->add_option("--builtin", builtin_spec,
                        "cyclic:n | dihedral:2n | quaternion:8 | elemab:p,k | klein | s3 | frobenius:20");
        sub->add_option("-p,--prime", p, "the prime p")->required();
        sub->add_option("--format", format, "json or tsv")->check(CLI::IsMember({"json", "tsv"}));
        sub->add_option("--order-cap", order_cap, "maximal group order");
    };

    auto* lattice = app.add_subcommand("lattice", "subgroup classes, p-subposet, Moebius matrix");
    add_common(lattice);
    bool artin = false;
    auto* cfb = app.add_subcommand("cfb", "Borel-Smith conditions and lattice");
    add_common(cfb);
    cfb->add_flag("--artin", artin, "add the oriented Artin conditions (CF_ba+)");
    auto* dade = app.add_subcommand("dade", "invariant factors of CF/CF_ba+");
    add_common(dade);
    auto* classify = app.add_subcommand("classify", "free rank and torsion of the endotrivial group");
    add_common(classify);
    std::string hmarks;
    bool no_reduce = false, full = false;
    auto* complex = app.add_subcommand("complex", "build the complex with given h-marks");
    add_common(complex);
    complex->add_option("--hmarks", hmarks, "comma-separated h-marks, one per p-subgroup class")->required();
    complex->add_option("--budget", budget, "tensor budget (total points)");
    complex->add_flag("--no-reduce", no_reduce, "keep the literal tensor product");
    complex->add_flag("--full", full, "serialize terms and differentials");
    auto* burnside = app.add_subcommand("burnside", "table of marks, units, surjectivity");
    add_common(burnside);
    burnside->add_option("--budget", budget, "tensor budget for constructive checks");
    std::string op, sub_path, fn_text;
    auto* biset = app.add_subcommand("biset", "res/inf/def/ind on superclass functions");
    biset->add_option("op", op, "res | inf | def | ind")->required();
    add_common(biset);
    biset->add_option("--sub", sub_path, "subgroup H (res/ind) or normal subgroup N (inf/def) as a group file")->required();
    biset->add_option("--f", fn_text, "comma-separated function values")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (budget == 0 || order_cap == 0)
            throw ValidationError("budgets must be positive");
        if (group_file.empty() == builtin_spec.empty())
            throw ValidationError("give exactly one of a group file or --builtin");
        GroupLimits limits;
        limits.order_cap = order_cap;
        auto g = std::make_shared<const PermGroup>(group_file.empty() ? builtin::from_spec(builtin_spec)
                                                                      : read_group_file(group_file, limits));
        const auto l = load(g, p, group_file.empty() ? "builtin:" + builtin_spec : group_file);
        const bool tsv = format == "tsv";
        auto* cmd = app.get_subcommands().front();
        if (tsv && cmd != cfb && cmd != burnside)
            throw ValidationError("tsv output is available for cfb and burnside only");
        BuildOptions opts;
        opts.budget = budget;
        opts.reduce = !no_reduce;

        if (cmd == lattice)
            cmd_lattice(l);
        else if (cmd == cfb)
            cmd_cfb(l, artin, tsv);
        else if (cmd == dade)
            cmd_dade(l);
        else if (cmd == classify)
            cmd_classify(l);
        else if (cmd == complex)
            cmd_complex(l, hmarks, opts, full);
        else if (cmd == burnside)
            cmd_burnside(l, opts, tsv);
        else if (cmd == biset)
            cmd_biset(l, op, sub_path, fn_text);
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
