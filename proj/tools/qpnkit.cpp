#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qpnkit/qpnkit.hpp"

namespace {

std::optional<qpnkit::DegreeWindow> parse_window(const std::string& spec, std::string& err)
{
    const std::size_t colon = spec.find(':');
    if (colon == std::string::npos) {
        err = "--window expects LO:HI";
        return std::nullopt;
    }
    try {
        int lo = std::stoi(spec.substr(0, colon));
        int hi = std::stoi(spec.substr(colon + 1));
        return qpnkit::DegreeWindow{lo, hi};
    } catch (const std::exception&) {
        err = "--window expects integers LO:HI";
        return std::nullopt;
    }
}

int emit_usage_error(const std::string& detail)
{
    qpnkit::Json err{{"kind", "UsageError"}, {"detail", detail}};
    std::cout << qpnkit::Json{{"error", std::move(err)}}.dump() << '\n';
    return 2;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"verification sessions over graded modules and their evaluations"};
    app.require_subcommand(1);

    CLI::App* run = app.add_subcommand("run", "run a session script, one JSON report per command");
    std::string path;
    run->add_option("script", path, "session script file")->required();
    std::string window_spec;
    run->add_option("--window", window_spec, "override report windows, as LO:HI");
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = run->add_option("--seed", seed, "seed for randomized commands");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    qpnkit::RunOptions opt;
    if (!window_spec.empty()) {
        std::string err;
        auto w = parse_window(window_spec, err);
        if (!w)
            return emit_usage_error(err);
        opt.window = *w;
    }
    if (seed_opt->count() > 0)
        opt.seed = seed;

    std::ifstream in(path, std::ios::binary);
    if (!in)
        return emit_usage_error("cannot open script '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();

    try {
        qpnkit::Script sc = qpnkit::parse_script(buf.str());
        return qpnkit::run_script(sc, std::cout, opt);
    } catch (const qpnkit::Error& e) {
        std::cout << qpnkit::error_json(e).dump() << '\n';
        return 2;
    }
}
