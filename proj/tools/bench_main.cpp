// Benchmark comparing the OpenMP kernels against their serial reference
// implementations: truth-table equivalence scans, brute-force CNF scans,
// and batch sentence parsing. Results must agree bit-for-bit; only the
// wall time may differ.

#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>

#include "l2l/english.hpp"
#include "l2l/pipeline.hpp"
#include "l2l/sat.hpp"

namespace {

using namespace l2l;

double now_seconds() {
#ifdef _OPENMP
    return omp_get_wtime();
#else
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
#endif
}

// Random expression over atoms [0, n_atoms).
Expr random_expr(std::mt19937& rng, int n_atoms, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 0 : 5);
    switch (pick(rng)) {
        case 1:
            return Expr::negate(random_expr(rng, n_atoms, depth - 1));
        case 2:
            return Expr::conj({random_expr(rng, n_atoms, depth - 1),
                               random_expr(rng, n_atoms, depth - 1)});
        case 3:
            return Expr::disj({random_expr(rng, n_atoms, depth - 1),
                               random_expr(rng, n_atoms, depth - 1)});
        case 4:
            return Expr::implies(random_expr(rng, n_atoms, depth - 1),
                                 random_expr(rng, n_atoms, depth - 1));
        case 5:
            return Expr::iff(random_expr(rng, n_atoms, depth - 1),
                             random_expr(rng, n_atoms, depth - 1));
        default:
            return Expr::atom(std::uniform_int_distribution<int>(0, n_atoms - 1)(rng));
    }
}

ClauseSet random_cnf(std::mt19937& rng, int n_atoms, int n_clauses, int width,
                     const ClauseSet::TablePtr& table) {
    std::uniform_int_distribution<int> atom(0, n_atoms - 1);
    std::uniform_int_distribution<int> coin(0, 1);
    std::vector<Clause> clauses;
    for (int i = 0; i < n_clauses; ++i) {
        std::vector<Literal> lits;
        for (int j = 0; j < width; ++j) lits.push_back(Literal{atom(rng), coin(rng) == 1});
        clauses.push_back(Clause(std::move(lits)));
    }
    return ClauseSet(std::move(clauses), table);
}

void report(const char* name, double serial_s, double parallel_s) {
    std::printf("%-28s serial %8.3f ms   parallel %8.3f ms   speedup %.2fx\n", name,
                serial_s * 1e3, parallel_s * 1e3, parallel_s > 0 ? serial_s / parallel_s : 0.0);
}

void bench_truth_tables(int pairs, int n_atoms) {
    // Equivalent pairs: both policies must scan the whole table, so the
    // comparison measures the kernel, not the serial path's early exit.
    std::mt19937 rng(7);
    std::vector<std::pair<Expr, Expr>> cases;
    for (int i = 0; i < pairs; ++i) {
        Expr e = random_expr(rng, n_atoms, 7);
        cases.emplace_back(e, to_nnf(e));
    }

    int agree_serial = 0, agree_parallel = 0;
    double t0 = now_seconds();
    for (const auto& [a, b] : cases) agree_serial += equiv_truth_table(a, b, Exec::serial);
    double t1 = now_seconds();
    for (const auto& [a, b] : cases) agree_parallel += equiv_truth_table(a, b, Exec::parallel);
    double t2 = now_seconds();

    if (agree_serial != agree_parallel) {
        std::fprintf(stderr, "MISMATCH: truth-table kernels disagree\n");
        std::exit(1);
    }
    report("truth-table equivalence", t1 - t0, t2 - t1);
}

void bench_sat_scan(int instances, int n_atoms) {
    std::mt19937 rng(11);
    auto table = std::make_shared<AtomTable>();
    for (int i = 0; i < n_atoms; ++i) table->intern_phrase("p" + std::to_string(i));
    ClauseSet::TablePtr table_ptr = table;

    // Dense instances sit far past the satisfiability threshold, so the
    // scan almost always covers the full assignment space under both
    // policies.
    std::vector<ClauseSet> cases;
    std::vector<AtomId> atoms;
    for (int i = 0; i < n_atoms; ++i) atoms.push_back(i);
    for (int i = 0; i < instances; ++i)
        cases.push_back(random_cnf(rng, n_atoms, 8 * n_atoms, 3, table_ptr));

    std::uint64_t sum_serial = 0, sum_parallel = 0;
    double t0 = now_seconds();
    for (const ClauseSet& cs : cases)
        sum_serial += lowest_satisfying_mask(cs, atoms, Exec::serial).value_or(0);
    double t1 = now_seconds();
    for (const ClauseSet& cs : cases)
        sum_parallel += lowest_satisfying_mask(cs, atoms, Exec::parallel).value_or(0);
    double t2 = now_seconds();

    if (sum_serial != sum_parallel) {
        std::fprintf(stderr, "MISMATCH: satisfying-mask kernels disagree\n");
        std::exit(1);
    }
    report("CNF brute-force scan", t1 - t0, t2 - t1);
}

void bench_paragraph_parse(int repeats) {
    std::string paragraph;
    const char* sentences[] = {
        "The circus has a ferris wheel or a rollercoaster. ",
        "If it rains then the ground is wet. ",
        "The circus does not have a carousel. ",
        "It rains and it pours. ",
    };
    for (int i = 0; i < repeats; ++i) paragraph += sentences[i % 4];

    double t0 = now_seconds();
    ParagraphResult serial = paragraph_to_exprs(paragraph, Grammar::built_in(), Exec::serial);
    double t1 = now_seconds();
    ParagraphResult parallel =
        paragraph_to_exprs(paragraph, Grammar::built_in(), Exec::parallel);
    double t2 = now_seconds();

    bool same = serial.table == parallel.table &&
                serial.sentences.size() == parallel.sentences.size();
    for (std::size_t i = 0; same && i < serial.sentences.size(); ++i)
        same = serial.sentences[i].expr.has_value() == parallel.sentences[i].expr.has_value();
    if (!same) {
        std::fprintf(stderr, "MISMATCH: paragraph kernels disagree\n");
        std::exit(1);
    }
    report("paragraph parsing", t1 - t0, t2 - t1);
}

}  // namespace

int main(int argc, char** argv) {
    bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled; parallel policy falls back to serial\n");
#endif
    bench_truth_tables(quick ? 8 : 64, 16);
    bench_sat_scan(quick ? 4 : 32, quick ? 16 : 20);
    bench_paragraph_parse(quick ? 200 : 4000);
    return 0;
}
