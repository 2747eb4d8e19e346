// Command-line front end: validation, cohomology, classification, comparison, self-test, fixtures.
//
// Exit codes: 0 success, 1 validation or self-test failure, 2 resource cap, 3 malformed input.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "diffcech/acceptance.hpp"
#include "diffcech/bundles.hpp"
#include "diffcech/cohomology.hpp"
#include "diffcech/fixtures.hpp"

#ifndef DIFFCECH_GOLDEN_DIR
#define DIFFCECH_GOLDEN_DIR "tests/golden"
#endif

using namespace diffcech;

namespace {

enum Exit { ok = 0, invalid = 1, resource = 2, malformed = 3 };

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedInput("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

PlotPresentation load_presentation(const std::string& path) { return parse_presentation(read_file(path)); }

/// A group file, or inline JSON such as {"cyclic": 3}.
FiniteGroup load_group(const std::string& arg) {
    return parse_group(std::filesystem::is_regular_file(arg) ? read_file(arg) : arg);
}

/// "Z+Z/2" style text, or a group file whose group is abelian.
FgAbGroup load_coefficients(const std::string& arg) {
    if (!std::filesystem::is_regular_file(arg)) return FgAbGroup::parse(arg);
    const auto g = load_group(arg);
    if (!g.is_abelian()) throw MalformedInput("coefficient group in '" + arg + "' is not abelian");
    return g.abelianization();
}

/// Validation failures are reported on standard error; returns true when the presentation is sound.
bool require_valid(const PlotPresentation& p) {
    const auto v = validate_presentation(p);
    for (const auto& e : v) std::cerr << e.kind << ": " << e.message << "\n";
    return v.empty();
}

int cmd_validate(const std::string& path) {
    const auto p = load_presentation(path);
    if (!require_valid(p)) return invalid;
    std::cout << "valid: " << p.points().size() << " points, " << p.probes().size() << " probes, " << p.maps().size()
              << " maps after closure\n";
    return ok;
}

int cmd_cohomology(const std::string& path, const std::string& coeff, std::size_t degree, const std::string& theory,
                   bool json) {
    const auto p = load_presentation(path);
    if (!require_valid(p)) return invalid;
    const auto r = cross_checked_reports(p, load_coefficients(coeff), parse_theory(theory), degree)[degree];
    if (json) {
        std::cout << report_to_json(r).dump(2) << "\n";
    } else {
        if (r.answer) std::cout << "H^" << r.degree << " = " << r.answer->to_string() << "\n";
        for (const auto& c : r.caveats) std::cout << "note: " << c << "\n";
    }
    if (!r.answer) {
        std::cerr << r.error << "\n";
        return resource;
    }
    return ok;
}

int cmd_classify(const std::string& path, const std::string& group, bool json) {
    const auto p = load_presentation(path);
    if (!require_valid(p)) return invalid;
    const auto g = load_group(group);
    const auto c = classify_bundles(p, g);
    if (json) {
        std::cout << classification_to_json(p, c, g).dump(2) << "\n";
    } else {
        std::cout << c.classes.size() << " classes among " << c.object_count << " cocycles, gauge group order "
                  << c.gauge_order << "\n";
        for (std::size_t i = 0; i < c.classes.size(); ++i) {
            const auto& k = c.classes[i];
            std::cout << "class " << i << ": " << k.size << " cocycles, automorphism group of order " << k.gauge.order;
            if (k.gauge.structure) std::cout << " (" << k.gauge.structure->to_string() << ")";
            std::cout << "\n";
        }
        for (const auto& problem : c.problems) std::cout << "problem: " << problem << "\n";
    }
    return c.problems.empty() && c.law_violations.empty() ? ok : invalid;
}

int cmd_compare(const std::string& path, const std::string& coeff, std::size_t k_max, bool bar, bool json) {
    const auto p = load_presentation(path);
    if (!require_valid(p)) return invalid;
    const auto c = compare_theories(p, load_coefficients(coeff), k_max, bar);
    std::cout << (json ? comparison_to_json(c).dump(2) + "\n" : comparison_to_text(c));
    return ok;
}

int cmd_selftest(std::uint64_t seed, const std::string& golden, bool json) {
    const auto results = acceptance::run(seed, golden, [](const acceptance::CriterionResult& r) {
        std::cerr << "AC" << r.id << " finished in " << std::fixed << std::setprecision(2) << r.seconds << " s\n";
    });
    std::cout << (json ? acceptance::report_json(results, seed).dump(2) + "\n" : acceptance::report_text(results));
    return acceptance::all_passed(results) ? ok : invalid;
}

int cmd_fixtures(const std::string& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& f : fixtures::all()) {
        const auto path = std::filesystem::path(dir) / (f.name + ".json");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw MalformedInput("cannot write '" + path.string() + "'");
        out << dump_presentation(f.make());
        std::cout << path.string() << "\n";
    }
    const std::pair<const char*, FiniteGroup> groups[] = {
        {"z2", FiniteGroup::cyclic(2)}, {"z3", FiniteGroup::cyclic(3)}, {"s3", FiniteGroup::symmetric(3)}};
    for (const auto& [name, g] : groups) {
        const auto path = std::filesystem::path(dir) / (std::string(name) + ".json");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw MalformedInput("cannot write '" + path.string() + "'");
        out << group_to_json(g).dump(2) << "\n";
        std::cout << path.string() << "\n";
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Diffeological Čech cohomology and principal bundles on finite plot presentations"};
    app.require_subcommand(1);

    std::string path, coeff = "Z", theory = "tot", group, dir = "fixtures", golden = DIFFCECH_GOLDEN_DIR;
    std::size_t degree = 0, k_max = 2;
    std::uint64_t seed = 1;
    bool json = false, bar = false;

    auto* validate = app.add_subcommand("validate", "check a presentation file");
    validate->add_option("presentation", path, "presentation JSON")->required();

    auto* cohomology = app.add_subcommand("cohomology", "one cohomology group");
    cohomology->add_option("presentation", path, "presentation JSON")->required();
    cohomology->add_option("--coeff", coeff, "coefficients: Z, Z/n sums such as Z+Z/4, or an abelian group file");
    cohomology->add_option("--degree", degree, "degree k")->required();
    cohomology->add_option("--theory", theory, "piz-qx, piz-bm, kww or tot (cross-checked against piz-qx)");
    cohomology->add_flag("--json", json, "JSON report");

    auto* classify = app.add_subcommand("classify", "principal bundles up to isomorphism");
    classify->add_option("presentation", path, "presentation JSON")->required();
    classify->add_option("--group", group, "group file, or inline JSON such as {\"symmetric\": 3}")->required();
    classify->add_flag("--json", json, "JSON report");

    auto* compare = app.add_subcommand("compare", "tabulate all theories");
    compare->add_option("presentation", path, "presentation JSON")->required();
    compare->add_option("--coeff", coeff, "coefficients");
    compare->add_option("--max-degree", k_max, "highest degree");
    compare->add_flag("--bar", bar, "include the PIZ-BM route");
    compare->add_flag("--json", json, "JSON report");

    auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
    selftest->add_option("--seed", seed, "seed for the randomized criteria");
    selftest->add_option("--golden-dir", golden, "directory holding golden reports");
    selftest->add_flag("--json", json, "JSON report");

    auto* fixtures_cmd = app.add_subcommand("fixtures", "write the shared fixtures");
    fixtures_cmd->add_option("--dir", dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return malformed;
    }

    try {
        if (*validate) return cmd_validate(path);
        if (*cohomology) return cmd_cohomology(path, coeff, degree, theory, json);
        if (*classify) return cmd_classify(path, group, json);
        if (*compare) return cmd_compare(path, coeff, k_max, bar, json);
        if (*selftest) return cmd_selftest(seed, golden, json);
        if (*fixtures_cmd) return cmd_fixtures(dir);
    } catch (const MalformedInput& e) {
        std::cerr << "malformed input: " << e.what() << "\n";
        return malformed;
    } catch (const BoundError& e) {
        std::cerr << "malformed input: " << e.what() << "\n";
        return malformed;
    } catch (const ResourceLimit& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return resource;
    } catch (const ModelError& e) {
        std::cerr << "invalid: " << e.what() << "\n";
        return invalid;
    }
    return ok;
}
