#include "rwre/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace rwre::io {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_field_csv(const Field& f, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    const int d = f.domain().dim();
    for (int i = 0; i < d; ++i) out << "coord_" << (i + 1) << ",";
    out << "value\r\n";
    f.for_each_sorted([&](const Site& x, double v) {
        for (int i = 0; i < d; ++i) out << x[i] << ",";
        out << format_g17(v) << "\r\n";
    });
}

Field read_field_csv(const std::filesystem::path& path,
                     std::shared_ptr<const LatticeDomain> dom) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    std::getline(in, line);  // header
    Field f(std::move(dom));
    const int d = f.domain().dim();
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ss(line);
        Site x;
        std::string tok;
        for (int i = 0; i < d; ++i) {
            std::getline(ss, tok, ',');
            x[i] = std::stoi(tok);
        }
        std::getline(ss, tok, ',');
        f.set(x, std::stod(tok));
    }
    return f;
}

void write_kernel_slice(const KernelSlice& ks, const std::filesystem::path& csv_path,
                        const std::filesystem::path& json_path, std::uint64_t seed) {
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot open " + csv_path.string());
    const int d = ks.field.dim;
    for (int i = 0; i < d; ++i) out << "coord_" << (i + 1) << ",";
    out << "probability\r\n";
    for_each_inner(ks.field, [&](const Site& rel, std::int64_t k) {
        const Site x = ks.x0 + rel;
        for (int i = 0; i < d; ++i) out << x[i] << ",";
        out << format_g17(ks.field.a[static_cast<std::size_t>(k)]) << "\r\n";
    });
    ordered_json j;
    j["x0"] = std::vector<int>(ks.x0.c.begin(), ks.x0.c.begin() + d);
    j["t"] = ks.time;
    j["discrete"] = ks.discrete;
    j["deficit"] = ks.deficit;
    j["seed"] = seed;
    write_json(j, json_path);
}

ordered_json environment_to_json(const Environment& env) {
    const auto& law = env.law();
    ordered_json j;
    j["dim"] = law.dim;
    j["kappa"] = law.kappa;
    j["law"] = law_name(law.kind);
    j["params"] = law.params;
    j["master_seed"] = law.master_seed;
    ordered_json ov = ordered_json::array();
    for (const auto& [site, w] : env.overrides()) {
        ordered_json e;
        e["site"] = std::vector<int>(site.c.begin(), site.c.begin() + law.dim);
        e["weights"] = std::vector<double>(w.w.begin(), w.w.begin() + law.dim);
        ov.push_back(e);
    }
    j["overrides"] = ov;
    ordered_json off = ordered_json::array();
    for (int i = 0; i < law.dim; ++i) off.push_back(env.origin_offset()[i]);
    j["origin_offset"] = off;
    return j;
}

Environment environment_from_json(const ordered_json& j) {
    EnvironmentLaw law;
    law.dim = j.at("dim").get<int>();
    law.kappa = j.at("kappa").get<double>();
    law.kind = law_from_name(j.at("law").get<std::string>());
    law.params = j.at("params").get<std::vector<double>>();
    law.master_seed = j.at("master_seed").get<std::uint64_t>();
    Environment env(law);
    if (j.contains("overrides")) {
        for (const auto& e : j.at("overrides")) {
            Site s;
            const auto coords = e.at("site").get<std::vector<int>>();
            for (int i = 0; i < law.dim; ++i) s[i] = coords[static_cast<std::size_t>(i)];
            DiagWeights w;
            const auto ws = e.at("weights").get<std::vector<double>>();
            for (int i = 0; i < law.dim; ++i) w.w[static_cast<std::size_t>(i)] = ws[static_cast<std::size_t>(i)];
            env = env.with_override(s, w);  // keys are base coordinates, shift applied after
        }
    }
    if (j.contains("origin_offset")) {
        Site off;
        const auto coords = j.at("origin_offset").get<std::vector<int>>();
        for (int i = 0; i < law.dim; ++i) off[i] = coords[static_cast<std::size_t>(i)];
        env = env.shift(off);
    }
    return env;
}

void write_json(const ordered_json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << j.dump(2) << "\n";
}

void emit_plot_script(const std::filesystem::path& curve_csv, const std::string& kind,
                      const std::filesystem::path& out_path, int dim) {
    if (!std::filesystem::exists(curve_csv))
        throw std::runtime_error("emit_plot_script: missing input " + curve_csv.string());
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open " + out_path.string());
    const std::string fname = curve_csv.filename().string();
    out << "set datafile separator ','\n";
    if (kind == "decay") {
        out << "set logscale xy\nset xlabel '1+t'\nset ylabel 'Var_Q / L1'\n";
        out << "ref(x) = x**(-" << dim / 2.0 << ")\n";
        out << "plot '" << fname << "' using ($1+1):2 with linespoints title 'Var_Q', \\\n";
        out << "     '" << fname << "' using ($1+1):4 with linespoints title 'L1', \\\n";
        out << "     ref(x) with lines dashtype 2 title 't^{-d/2} guide'\n";
    } else if (kind == "rate") {
        out << "set logscale xy\nset xlabel 'R'\nset ylabel 'error'\n";
        out << "plot '" << fname << "' using 1:2 with linespoints title 'homogenization error'\n";
    } else if (kind == "envelope-hist") {
        out << "binwidth = 0.25\nbin(x,w) = w*floor(x/w) + w/2.0\n";
        out << "set style fill solid 0.4\n";
        out << "plot '" << fname
            << "' using (bin($2,binwidth)):(1.0) smooth freq with boxes title 'H_up', \\\n";
        out << "     '" << fname
            << "' using (bin($3,binwidth)):(1.0) smooth freq with boxes title 'H_low'\n";
    } else {
        throw ConfigError("emit_plot_script: unknown kind '" + kind + "'");
    }
}

}  // namespace rwre::io
