#include "pdg/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "pdg/errors.hpp"

namespace pdg {

ClassifyOptions classify_options(int m, const DiscretizationOptions& options)
{
    ClassifyOptions copts;
    copts.n_sub = options.n_sub > 0 ? options.n_sub : std::max(4, m + 1);
    copts.strict = options.strict;
    if (options.relaxed_geometry) {
        copts.anchor_rings = 2;
        copts.drop_face_excursions = true;
    }
    return copts;
}

Discretization discretize(PolygonalMesh mesh, const LevelSet& phi, int m, const DiscretizationOptions& options)
{
    Discretization d;
    d.mesh = std::make_unique<PolygonalMesh>(std::move(mesh));
    d.topology = std::make_unique<CutTopology>(classify(*d.mesh, phi, classify_options(m, options)));
    PatchOptions popts;
    popts.target = options.patch_target;
    d.patches = std::make_unique<PatchTable>(build_patches(*d.mesh, *d.topology, m, popts));
    d.space = std::make_unique<GlobalSpace>(*d.mesh, *d.topology, *d.patches);
    return d;
}

PolygonalMesh benchmark_mesh(const BenchmarkSpec& spec, double h) { return generate_triangular_mesh(spec.domain, h); }

PolygonalMesh benchmark_mesh(const std::string& file)
{
    std::filesystem::path path(file);
    if (path.is_relative() && !std::filesystem::exists(path))
        path = std::filesystem::path(data_directory()) / path;
    return load_polygonal_mesh(path);
}

namespace {

struct MeshEntry {
    std::optional<double> h;
    std::string file;
    std::string label() const
    {
        if (!h)
            return file;
        std::ostringstream s;
        s.precision(12);
        s << "h=" << *h;
        return s.str();
    }
};

RunRow run_one(const BenchmarkSpec& spec, const RunConfig& config, const MeshEntry& entry)
{
    RunRow row;
    row.mesh = entry.label();
    std::string stage = "mesh";
    try {
        PolygonalMesh mesh = entry.h ? benchmark_mesh(spec, *entry.h) : benchmark_mesh(entry.file);
        row.report.h = entry.h ? *entry.h : mesh.h();

        stage = "classify";
        Discretization d;
        d.mesh = std::make_unique<PolygonalMesh>(std::move(mesh));
        DiscretizationOptions dopts;
        dopts.n_sub = config.n_sub;
        dopts.relaxed_geometry = config.relaxed_geometry;
        d.topology = std::make_unique<CutTopology>(classify(*d.mesh, spec.level_set, classify_options(config.m, dopts)));
        row.cut_cells = d.topology->num_cut_cells();
        row.relaxations = static_cast<int>(d.topology->relaxations().size());

        stage = "patch";
        PatchOptions popts;
        popts.target = config.patch_target;
        d.patches = std::make_unique<PatchTable>(build_patches(*d.mesh, *d.topology, config.m, popts));
        row.augmented_patches = d.patches->augmented_count();

        stage = "reconstruction";
        d.space = std::make_unique<GlobalSpace>(*d.mesh, *d.topology, *d.patches);
        row.report.n_dof = d.space->n_dof();

        stage = "assembly";
        PenaltyConfig penalty;
        penalty.eta = config.eta;
        const DGSystem system = assemble(*d.space, spec.problem_data(), penalty, config.orders);
        row.eta = system.eta;

        stage = "solver";
        const Solution sol = solve(system, config.solver);
        row.solver = sol.stats;
        if (config.condition)
            row.condition = condition_estimate(system);

        stage = "error_analysis";
        row.report.l2_error = l2_error(*d.space, sol.values, spec.exact, config.error_order);
        const DGError dg = dg_energy_error(*d.space, sol.values, spec.exact, config.error_order);
        row.report.dg_error = dg.total;
        row.report.dg_parts = dg.parts;
        row.ok = true;
    } catch (const std::exception& e) {
        row.ok = false;
        row.stage = stage;
        row.error = e.what();
    }
    return row;
}

std::string fmt(double v)
{
    if (std::isnan(v))
        return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10e", v);
    return buf;
}

} // namespace

std::vector<ErrorReport> RunResult::reports() const
{
    std::vector<ErrorReport> out;
    for (const auto& row : rows)
        if (row.ok)
            out.push_back(row.report);
    if (!out.empty())
        convergence_orders(out);
    return out;
}

bool RunResult::all_ok() const
{
    return std::all_of(rows.begin(), rows.end(), [](const RunRow& r) { return r.ok; });
}

RunResult run_benchmark(const RunConfig& config)
{
    if (config.m < 0)
        throw InvalidParameter("polynomial degree must be non-negative");
    const BenchmarkSpec spec = get_benchmark(config.benchmark);
    verify_benchmark_consistency(spec);

    std::vector<MeshEntry> entries;
    const auto files = !config.mesh_files.empty() ? config.mesh_files
                       : config.h_list.empty()    ? spec.mesh_files
                                                  : std::vector<std::string>{};
    if (!files.empty()) {
        for (const auto& f : files)
            entries.push_back({std::nullopt, f});
    } else {
        const auto& hs = config.h_list.empty() ? spec.h_list : config.h_list;
        for (std::size_t i = 1; i < hs.size(); ++i)
            if (!(hs[i] < hs[i - 1]))
                throw InvalidParameter("h list must be strictly decreasing");
        for (double h : hs)
            entries.push_back({h, {}});
    }

    RunResult result;
    result.config = config;
    result.rows.resize(entries.size());
    const int jobs = config.jobs > 0 ? config.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    for (std::size_t start = 0; start < entries.size(); start += static_cast<std::size_t>(jobs)) {
        const std::size_t end = std::min(entries.size(), start + static_cast<std::size_t>(jobs));
        if (jobs == 1) {
            result.rows[start] = run_one(spec, config, entries[start]);
            continue;
        }
        std::vector<std::future<RunRow>> futures;
        for (std::size_t i = start; i < end; ++i)
            futures.push_back(std::async(std::launch::async, run_one, std::cref(spec), std::cref(config),
                                         std::cref(entries[i])));
        for (std::size_t i = start; i < end; ++i)
            result.rows[i] = futures[i - start].get();
    }

    // Orders between consecutive successful rows.
    const ErrorReport* prev = nullptr;
    for (auto& row : result.rows) {
        if (!row.ok)
            continue;
        if (prev && row.report.h < prev->h) {
            row.report.l2_order = observed_order(prev->l2_error, row.report.l2_error, prev->h, row.report.h);
            row.report.dg_order = observed_order(prev->dg_error, row.report.dg_error, prev->h, row.report.h);
        }
        prev = &row.report;
    }

    if (!config.out_dir.empty())
        write_outputs(result, config.out_dir);
    return result;
}

void write_errors_csv(const RunResult& result, std::ostream& out)
{
    out << "h,n_dof,l2_error,l2_order,dg_error,dg_order,dg_broken_h1,dg_face_jump,dg_face_average,"
           "dg_interface_jump,dg_interface_average\n";
    for (const auto& row : result.rows) {
        if (!row.ok)
            continue;
        const auto& r = row.report;
        out << fmt(r.h) << ',' << r.n_dof << ',' << fmt(r.l2_error) << ',' << fmt(r.l2_order) << ','
            << fmt(r.dg_error) << ',' << fmt(r.dg_order);
        for (double p : r.dg_parts.as_array())
            out << ',' << fmt(p);
        out << '\n';
    }
}

void write_orders_csv(const RunResult& result, std::ostream& out)
{
    out << "h_coarse,h_fine,l2_order,dg_order\n";
    const ErrorReport* prev = nullptr;
    for (const auto& row : result.rows) {
        if (!row.ok)
            continue;
        if (prev)
            out << fmt(prev->h) << ',' << fmt(row.report.h) << ',' << fmt(row.report.l2_order) << ','
                << fmt(row.report.dg_order) << '\n';
        prev = &row.report;
    }
}

void write_run_json(const RunResult& result, std::ostream& out)
{
    using nlohmann::json;
    const auto& c = result.config;
    json cfg;
    cfg["benchmark"] = c.benchmark;
    cfg["order"] = c.m;
    cfg["h"] = c.h_list;
    cfg["mesh_files"] = c.mesh_files;
    cfg["eta"] = c.eta;
    cfg["patch_target"] = c.patch_target > 0 ? c.patch_target : default_patch_target(c.m);
    cfg["quadrature_volume"] = c.orders.volume >= 0 ? c.orders.volume : 2 * c.m + 2;
    cfg["quadrature_trace"] = c.orders.trace >= 0 ? c.orders.trace : 2 * c.m + 2;
    cfg["quadrature_error"] = c.error_order >= 0 ? c.error_order : 2 * c.m + 4;
    cfg["nsub"] = c.n_sub > 0 ? c.n_sub : std::max(4, c.m + 1);
    cfg["relaxed_geometry"] = c.relaxed_geometry;
    cfg["solver"] = c.solver.method == SolverMethod::Direct ? "direct" : "cg";
    cfg["solver_tol"] = c.solver.tol;

    json rows = json::array();
    for (const auto& row : result.rows) {
        json r;
        r["mesh"] = row.mesh;
        r["ok"] = row.ok;
        if (!row.ok) {
            r["stage"] = row.stage;
            r["error"] = row.error;
            rows.push_back(r);
            continue;
        }
        r["h"] = row.report.h;
        r["n_dof"] = row.report.n_dof;
        r["l2_error"] = row.report.l2_error;
        r["dg_error"] = row.report.dg_error;
        r["eta"] = row.eta;
        r["cut_cells"] = row.cut_cells;
        r["augmented_patches"] = row.augmented_patches;
        r["geometry_relaxations"] = row.relaxations;
        r["solver_iterations"] = row.solver.iterations;
        r["relative_residual"] = row.solver.relative_residual;
        if (row.condition) {
            r["lambda_min"] = row.condition->lambda_min;
            r["lambda_max"] = row.condition->lambda_max;
            r["condition"] = row.condition->condition();
        }
        rows.push_back(r);
    }
    json doc;
    doc["config"] = cfg;
    doc["runs"] = rows;
    out << doc.dump(2) << '\n';
}

void write_outputs(const RunResult& result, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream f(dir / name);
        if (!f)
            throw Error("cannot write " + (dir / name).string());
        return f;
    };
    auto errors = open("errors.csv");
    write_errors_csv(result, errors);
    auto orders = open("orders.csv");
    write_orders_csv(result, orders);
    auto run = open("run.json");
    write_run_json(result, run);
}

std::vector<EfficiencyPoint> efficiency_report(const RunConfig& base, const std::vector<int>& degrees)
{
    std::vector<EfficiencyPoint> points;
    for (int m : degrees) {
        RunConfig cfg = base;
        cfg.m = m;
        cfg.out_dir.clear();
        const auto result = run_benchmark(cfg);
        for (const auto& row : result.rows)
            if (row.ok)
                points.push_back({m, row.report.h, row.report.n_dof, row.report.l2_error, row.report.dg_error});
    }
    return points;
}

void write_efficiency_csv(const std::vector<EfficiencyPoint>& points, std::ostream& out)
{
    out << "m,h,n_dof,l2_error,dg_error\n";
    for (const auto& p : points)
        out << p.m << ',' << fmt(p.h) << ',' << p.n_dof << ',' << fmt(p.l2_error) << ',' << fmt(p.dg_error) << '\n';
}

double parse_fraction(const std::string& text)
{
    const auto slash = text.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            const double v = std::stod(text, &used);
            if (used != text.size())
                throw std::invalid_argument(text);
            return v;
        }
        const std::string num = text.substr(0, slash), den = text.substr(slash + 1);
        const double a = std::stod(num, &used);
        if (used != num.size())
            throw std::invalid_argument(text);
        const double b = std::stod(den, &used);
        if (used != den.size() || b == 0.0)
            throw std::invalid_argument(text);
        return a / b;
    } catch (const std::logic_error&) {
        throw InvalidParameter("cannot parse mesh size '" + text + "'");
    }
}

std::vector<double> parse_h_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(parse_fraction(item));
    return out;
}

} // namespace pdg
