// Compares the OpenMP compose kernel against the serial reference on the
// deformed-B2 workload, and the parallel numeric zero test against a
// single-thread run. Results must be identical; timings are informative.
#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cms2/b2model.hpp"

using namespace cms2;
using Clock = std::chrono::steady_clock;

namespace {

double seconds(Clock::time_point t0, Clock::time_point t1) {
    return std::chrono::duration<double>(t1 - t0).count();
}

struct Row {
    const char* name;
    double serial, parallel;
    bool equal;
};

Row bench_compose_pair(const char* name, const DiffOp& A, const DiffOp& B, int reps) {
    DiffOp rs, rp;
    auto t0 = Clock::now();
    for (int i = 0; i < reps; ++i) rs = compose_serial(A, B);
    auto t1 = Clock::now();
    for (int i = 0; i < reps; ++i) rp = compose(A, B);
    auto t2 = Clock::now();
    return {name, seconds(t0, t1) / reps, seconds(t1, t2) / reps, rs == rp};
}

} // namespace

int main(int argc, char** argv) {
    int reps = argc > 1 ? std::atoi(argv[1]) : 3;
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled)\n");
#endif

    B2Model sym(Scalar::sym_a(), Scalar(0), Scalar(0));
    DiffOp Ls = sym.build_L();
    DiffOp Ps = sym.build_P().P;

    B2Model ell(Scalar::sym_a(), Scalar::sym_g2(), Scalar::sym_g3());
    DiffOp Le = ell.build_L();
    DiffOp Pe = ell.build_P().P;

    std::printf("%-34s %12s %12s %9s %s\n", "workload", "serial [s]", "openmp [s]", "speedup",
                "identical");
    Row rows[] = {
        bench_compose_pair("compose L*P rational, symbolic a", Ls, Ps, reps),
        bench_compose_pair("compose P*L rational, symbolic a", Ps, Ls, reps),
        bench_compose_pair("compose L*P elliptic, symbolic", Le, Pe, reps),
        bench_compose_pair("compose P*P elliptic, symbolic", Pe, Pe, reps),
    };
    for (const Row& r : rows)
        std::printf("%-34s %12.4f %12.4f %8.2fx %s\n", r.name, r.serial, r.parallel,
                    r.serial / (r.parallel > 0 ? r.parallel : 1e-9), r.equal ? "yes" : "NO");

    // numeric zero test: parallel over sample points inside the call
    B2Model conc(Scalar(2), Scalar(3), Scalar(2));
    DiffOp K = commutator(conc.build_L(), conc.build_P().P);
    CoefElem worst;
    std::size_t nmax = 0;
    for (const auto& [k, c] : K.terms())
        if (c.terms().size() > nmax) {
            nmax = c.terms().size();
            worst = c;
        }
    auto t0 = Clock::now();
    auto rep = numeric_zero_test(worst, conc.bindings(), 64, B2Model::default_tolerance(), 7);
    auto t1 = Clock::now();
    std::printf("%-34s %12s %12.4f %9s %s\n", "numeric zero test, 64 points", "-",
                seconds(t0, t1), "-", rep.numerically_zero ? "zero" : "NONZERO");

    bool ok = true;
    for (const Row& r : rows) ok = ok && r.equal;
    return ok ? 0 : 1;
}
