#include <refp/catalog.hpp>
#include <refp/diagram.hpp>
#include <refp/fixedpoint.hpp>
#include <refp/fm.hpp>
#include <refp/lincheck.hpp>
#include <refp/newre.hpp>

#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

using namespace refp;
using catalog::Family;

namespace {

    auto read_data(const std::string & name) -> std::string
    {
        std::ifstream in(std::string(REFP_DATA_DIR) + "/" + name);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    void BM_newre_3col(benchmark::State & state)
    {
        auto p = parse_problem(read_data("3col-re.txt"));
        for (auto _ : state)
            benchmark::DoNotOptimize(newre(p.node));
    }
    BENCHMARK(BM_newre_3col);

    void BM_full_step_def3col(benchmark::State & state)
    {
        auto p = catalog::generate({Family::def3col_fp, static_cast<std::uint32_t>(state.range(0))});
        for (auto _ : state)
            benchmark::DoNotOptimize(full_step(p));
    }
    BENCHMARK(BM_full_step_def3col)->DenseRange(5, 8)->Unit(benchmark::kMillisecond);

    void BM_is_fixed_point_delta_coloring(benchmark::State & state)
    {
        auto p = catalog::generate({Family::delta_coloring_fp, static_cast<std::uint32_t>(state.range(0))});
        for (auto _ : state)
            benchmark::DoNotOptimize(is_fixed_point(p));
    }
    BENCHMARK(BM_is_fixed_point_delta_coloring)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

    // arg 1 enables every prune
    void BM_fixed_point_def2col(benchmark::State & state)
    {
        catalog::Key k{Family::def2col_fp, static_cast<std::uint32_t>(state.range(0))};
        auto p = catalog::generate(k);
        auto d = catalog::generate_diagram(k);
        d.validate();
        auto opts = state.range(1) ? FpOptions::all_prunes() : FpOptions{};
        for (auto _ : state)
            benchmark::DoNotOptimize(fixed_point(p, d, opts));
    }
    BENCHMARK(BM_fixed_point_def2col)->ArgsProduct({{4, 6, 8}, {0, 1}})->Unit(benchmark::kMillisecond);

    void BM_fixed_point_toy_default(benchmark::State & state)
    {
        auto p = parse_problem(read_data("toy.txt"));
        auto d = default_diagram(p).diagram;
        for (auto _ : state)
            benchmark::DoNotOptimize(fixed_point(p, d));
    }
    BENCHMARK(BM_fixed_point_toy_default);

    void BM_verify_worked_entry(benchmark::State & state)
    {
        auto l = lincheck::ledger_from_json(nlohmann::json::parse(read_data("psi/def3col-worked.json")));
        for (auto _ : state)
            benchmark::DoNotOptimize(lincheck::verify_entry(l.entries[0], l.assumptions, l.lines, l.diagram));
    }
    BENCHMARK(BM_verify_worked_entry)->Unit(benchmark::kMillisecond);

}

BENCHMARK_MAIN();
