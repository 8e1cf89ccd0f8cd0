#include <curveflow/metrics.hpp>
#include <curveflow/stepper.hpp>

#include <benchmark/benchmark.h>

namespace cf = curveflow;

namespace {

cf::SavStepper make_stepper(int n, cf::Scheme scheme) {
    cf::ShapeSpec shape;
    shape.kind = cf::ShapeSpec::Kind::Ellipse;
    cf::SavStepper::Options opt;
    opt.scheme = scheme;
    opt.r = scheme == cf::Scheme::Bdf2Sav ? 3 : 2;
    opt.dt = 1e-4;
    return cf::SavStepper(cf::initial_shape(shape, n),
                          cf::SurfaceEnergy::fourfold_cosine(0.05), opt);
}

void bm_step(benchmark::State& state, cf::Scheme scheme) {
    auto stepper = make_stepper(static_cast<int>(state.range(0)), scheme);
    for (auto _ : state) benchmark::DoNotOptimize(stepper.step());
}

void bm_assemble(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    cf::ShapeSpec shape;
    const cf::CurveState curve = cf::initial_shape(shape, n);
    const cf::SegmentFrame frame = cf::segment_frame(curve);
    const auto energy = cf::SurfaceEnergy::fourfold_cosine(0.05);
    const cf::TimeStencil stencil = cf::bdf1_stencil(curve);
    for (auto _ : state) {
        auto system =
            cf::assemble_closed(curve, frame, frame.normals, stencil, energy, 1e-4);
        benchmark::DoNotOptimize(system);
    }
}

void bm_manifold_distance(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    cf::ShapeSpec e1, e2;
    e2.a = 2.1;
    e2.b = 0.95;
    const cf::CurveState a = cf::initial_shape(e1, n);
    const cf::CurveState b = cf::initial_shape(e2, n);
    for (auto _ : state)
        benchmark::DoNotOptimize(cf::manifold_distance(a, b));
}

} // namespace

BENCHMARK_CAPTURE(bm_step, bdf1_sav, cf::Scheme::Bdf1Sav)->Arg(128)->Arg(512);
BENCHMARK_CAPTURE(bm_step, bdf2_sav, cf::Scheme::Bdf2Sav)->Arg(128)->Arg(512);
BENCHMARK_CAPTURE(bm_step, bdf1_csav, cf::Scheme::Bdf1Csav)->Arg(128);
BENCHMARK(bm_assemble)->Arg(128)->Arg(512);
BENCHMARK(bm_manifold_distance)->Arg(128)->Arg(512);

BENCHMARK_MAIN();
