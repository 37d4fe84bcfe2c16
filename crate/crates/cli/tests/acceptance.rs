//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if a criterion fails that is not on the known-red list.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use qwalk::classical::{continuous_evolve, euler_evolve, move_count, sample_walk_seeded, ProbDist};
use qwalk::coined::{
    coin_apply, dense_operator, naive_adjacency_operator, run, run_observed, swap_apply,
    CoinedState, HadamardCoin,
};
use qwalk::continuous::{phase_equivalence_report, QuantumState};
use qwalk::linalg::{unitarity_defect, ComplexMatrix};
use qwalk::oracle::{oracle_apply, oso_apply, PairState};
use qwalk::trotter::{
    check_hamiltonian, state_distance, t_exp_apply, trotter_run, trotter_run_regrouped, v_c_apply,
    TrotterOrdering, TrotterPlan,
};
use qwalk::{Graph, GraphKind, OracleCounter};
use support::Layout;

/// Criteria expected to fail, with the reason recorded in the project notes.
/// A listed criterion that starts passing is reported so the list is kept
/// honest.
const KNOWN_RED: &[u32] = &[4];

struct Outcome {
    id: u32,
    title: &'static str,
    failures: Vec<String>,
    details: Vec<String>,
}

impl Outcome {
    fn new(id: u32, title: &'static str) -> Self {
        Outcome {
            id,
            title,
            failures: Vec::new(),
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if ok {
            self.details.push(what);
        } else {
            self.failures.push(what);
        }
    }

    fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn identity(dim: usize) -> ComplexMatrix {
    ComplexMatrix::identity(dim, dim)
}

fn max_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Named and pseudo-random graphs with `N <= 8`.
fn small_graphs() -> Vec<(String, Graph)> {
    let mut out: Vec<(String, Graph)> = vec![
        ("K1".into(), Graph::new(1, &[]).unwrap()),
        ("K2".into(), Graph::new(2, &[(0, 1)]).unwrap()),
        (
            "P3".into(),
            Graph::generate(&GraphKind::Line { size: 3 }).unwrap(),
        ),
        (
            "C4".into(),
            Graph::generate(&GraphKind::Cycle { size: 4 }).unwrap(),
        ),
        (
            "K5".into(),
            Graph::generate(&GraphKind::Complete { size: 5 }).unwrap(),
        ),
        (
            "S4".into(),
            Graph::new(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap(),
        ),
        ("empty6".into(), Graph::new(6, &[]).unwrap()),
        (
            "C7".into(),
            Graph::generate(&GraphKind::Cycle { size: 7 }).unwrap(),
        ),
        (
            "Q3".into(),
            Graph::generate(&GraphKind::Hypercube { size: 8 }).unwrap(),
        ),
    ];
    for n in 3..=8 {
        let kind = GraphKind::Random {
            size: n,
            p: 0.5,
            seed: n as u64,
        };
        out.push((kind.to_string(), Graph::generate(&kind).unwrap()));
    }
    out
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::new(1, "operator algebra");
    let tau = 0.41;
    let mut worst_unitary = 0.0f64;
    for (name, g) in small_graphs() {
        let n = g.n();
        let dim = CoinedState::zero(n).dim();
        let op_o = dense_operator(n, |s| oracle_apply(s, &g, &mut OracleCounter::new()));
        let op_s = dense_operator(n, swap_apply);
        let op_c = dense_operator(n, |s| coin_apply(s, &HadamardCoin));
        let op_e = dense_operator(n, |s| t_exp_apply(s, tau));

        o.check(
            max_diff(&(&op_o * &op_o), &identity(dim)) < 1e-12,
            format!("{name}: O^2 = I"),
        );
        o.check(
            max_diff(&(&op_s * &op_s), &identity(dim)) < 1e-12,
            format!("{name}: S^2 = I"),
        );

        let mut ops = vec![
            ("O", op_o.clone()),
            ("S", op_s.clone()),
            ("C", op_c),
            ("exp(-i tau T)", op_e),
        ];
        for c in 0..n {
            ops.push(("V_c", dense_operator(n, |s| v_c_apply(s, &g, c))));
        }
        for (label, m) in &ops {
            let d = unitarity_defect(m);
            worst_unitary = worst_unitary.max(d);
            o.check(d < 1e-12, format!("{name}: {label} unitary ({d:.1e})"));
        }

        // OSO on the flag-0 block against the pair permutation
        let l = Layout::new(n);
        let oso = &op_o * &op_s * &op_o;
        let q = g.register_qubits();
        let r = 1usize << q;
        let mut pair = ComplexMatrix::zeros(r * r, r * r);
        for x in 0..r {
            for y in 0..r {
                let mut s = PairState::basis(q, x, y);
                oso_apply(&mut s, &g, &mut OracleCounter::new());
                for (row, a) in s.amplitudes().iter().enumerate() {
                    pair[(row, (x << q) | y)] = *a;
                }
            }
        }
        let mut block_diff = 0.0f64;
        let mut perm_diff = 0.0f64;
        for x in 0..r {
            for y in 0..r {
                let (sx, sy) = if g.adjacency(x, y) { (y, x) } else { (x, y) };
                for x2 in 0..r {
                    for y2 in 0..r {
                        let full = oso[(l.idx(x2, y2, 0), l.idx(x, y, 0))];
                        let p = pair[((x2 << q) | y2, (x << q) | y)];
                        block_diff = block_diff.max((full - p).norm());
                        let want = if (x2, y2) == (sx, sy) { 1.0 } else { 0.0 };
                        perm_diff = perm_diff.max((p - Complex64::new(want, 0.0)).norm());
                    }
                }
            }
        }
        o.check(
            block_diff == 0.0 && perm_diff == 0.0,
            format!("{name}: OSO is the edge pair permutation"),
        );
    }
    o.details = vec![format!(
        "{} graphs with N <= 8, worst unitarity defect {worst_unitary:.1e}",
        small_graphs().len()
    )];
    o
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::new(2, "coined-walk invariants");
    for kind in [
        GraphKind::Random {
            size: 16,
            p: 0.3,
            seed: 1,
        },
        GraphKind::Random {
            size: 12,
            p: 0.3,
            seed: 1,
        },
    ] {
        let g = Graph::generate(&kind).unwrap();
        let (mut norm, mut flag, mut pad) = (0.0f64, 0.0f64, 0.0f64);
        run_observed(
            0,
            &g,
            &HadamardCoin,
            1000,
            &mut OracleCounter::new(),
            |_, s| {
                norm = norm.max((s.norm() - 1.0).abs());
                flag = flag.max(s.flag_mass());
                pad = pad.max(s.padded_mass());
                Ok(())
            },
        )
        .unwrap();
        o.check(norm < 1e-9, format!("{kind}: norm drift {norm:.1e}"));
        o.check(flag < 1e-12, format!("{kind}: max Pr(b=1) {flag:.1e}"));
        o.check(
            pad < 1e-14,
            format!("{kind}: padded mass {:.1e}", pad.abs()),
        );
    }

    // dense (OSOC)^t from brute-force operators
    let mut worst = 0.0f64;
    for (_, g) in small_graphs() {
        let n = g.n();
        let l = Layout::new(n);
        let a = support::adjacency(l, g.edges());
        let op_o = support::oracle(l, &a);
        let u = &op_o * support::swap(l) * &op_o * support::on_y(l, &support::hadamard_power(l.q));
        let mut want = nalgebra::DVector::from_element(l.dim(), Complex64::new(0.0, 0.0));
        want[l.idx(0, 0, 0)] = Complex64::new(1.0, 0.0);
        for t in 0..=5 {
            let got = run(0, &g, &HadamardCoin, t, &mut OracleCounter::new()).unwrap();
            let got = nalgebra::DVector::from_column_slice(got.amplitudes());
            worst = worst.max((got - &want).camax());
            want = &u * want;
        }
    }
    o.check(
        worst < 1e-12,
        format!("dense (OSOC)^t, N <= 8, t <= 5: {worst:.1e}"),
    );
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::new(3, "continuous-walk phase equivalence");
    let regular = [
        ("C8", GraphKind::Cycle { size: 8 }),
        ("Q3", GraphKind::Hypercube { size: 8 }),
        ("K5", GraphKind::Complete { size: 5 }),
    ];
    let mut worst = 0.0f64;
    for (name, kind) in regular {
        let g = Graph::generate(&kind).unwrap();
        for gt in [0.5, 1.0, 2.0] {
            let psi0 = QuantumState::vertex(g.n(), 0).unwrap();
            let r = phase_equivalence_report(&g, &psi0, 1.0, gt).unwrap();
            let comp = r.max_component_diff.unwrap_or(f64::INFINITY);
            worst = worst.max(comp).max(r.max_dist_diff);
            o.check(
                comp < 1e-10 && r.max_dist_diff < 1e-10,
                format!(
                    "{name} at gamma t = {gt}: component {comp:.1e}, distribution {:.1e}",
                    r.max_dist_diff
                ),
            );
        }
    }
    let star = Graph::new(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
    let r =
        phase_equivalence_report(&star, &QuantumState::vertex(5, 0).unwrap(), 1.0, 1.0).unwrap();
    o.check(
        r.total_variation > 0.01,
        format!("star S4 TV {:.6} > 0.01", r.total_variation),
    );
    o.details = vec![
        format!("regular graphs worst difference {worst:.1e}"),
        format!("star S4 TV {:.6}", r.total_variation),
    ];
    o
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::new(4, "Trotter fidelity");
    let graphs = [
        GraphKind::Cycle { size: 8 },
        GraphKind::Random {
            size: 8,
            p: 0.4,
            seed: 1,
        },
    ];
    for kind in graphs {
        let g = Graph::generate(&kind).unwrap();
        let mut errs = Vec::new();
        let mut leak = 0.0f64;
        for j in [8usize, 16, 32, 64] {
            let plan = TrotterPlan::new(1.0, 1.0, j, TrotterOrdering::Interleaved).unwrap();
            let exact = qwalk::continuous::evolve(
                &g,
                &QuantumState::vertex(8, 0).unwrap(),
                qwalk::HamiltonianKind::Adjacency,
                1.0,
                1.0,
            )
            .unwrap();
            let outcome = trotter_run(&g, 0, &plan, &mut OracleCounter::new()).unwrap();
            leak = leak.max(outcome.max_ancilla_leakage);
            errs.push(state_distance(
                &outcome.state,
                &CoinedState::embed(exact.amplitudes()),
            ));
        }
        let ratios: Vec<f64> = errs.windows(2).map(|w| w[1] / w[0]).collect();
        let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.3}")).collect();
        o.check(
            ratios.iter().all(|&r| r <= 0.6),
            format!("{kind}: ratios [{}]", shown.join(", ")),
        );
        o.check(
            errs[3] < 1e-2,
            format!("{kind}: err(64) = {:.4e} < 1e-2", errs[3]),
        );
        o.check(leak < 1e-13, format!("{kind}: ancilla leakage {leak:.1e}"));

        let mut regroup = 0.0f64;
        for ordering in [TrotterOrdering::Interleaved, TrotterOrdering::PerColorPower] {
            for j in [1usize, 3, 8] {
                let plan = TrotterPlan::new(1.0, 1.0, j, ordering).unwrap();
                let a = trotter_run(&g, 0, &plan, &mut OracleCounter::new()).unwrap();
                let b = trotter_run_regrouped(&g, 0, &plan, &mut OracleCounter::new()).unwrap();
                regroup = regroup.max(state_distance(&a.state, &b));
            }
        }
        o.check(
            regroup < 1e-13,
            format!("{kind}: regrouped product {regroup:.1e}"),
        );
    }
    o
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::new(5, "Hamiltonian reconstruction");
    let gamma = 0.8;
    let (mut count, mut herm, mut restr, mut leak) = (0usize, 0.0f64, 0.0f64, 0.0f64);
    for n in 1..=6usize {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
            .collect();
        for mask in 0u32..(1 << pairs.len()) {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            let g = Graph::new(n, &edges).unwrap();
            let c = check_hamiltonian(&g, gamma).unwrap();
            herm = herm.max(c.hermiticity_defect);
            restr = restr.max(c.restriction_error);
            leak = leak.max(c.subspace_leak);
            count += 1;
        }
    }
    o.check(
        restr < 1e-12,
        format!("restriction equals gamma A: {restr:.1e}"),
    );
    o.check(herm < 1e-12, format!("hermiticity defect {herm:.1e}"));
    o.details.push(format!(
        "all {count} labelled graphs with N <= 6, subspace leak {leak:.1e}"
    ));
    o
}

fn criterion_6() -> Outcome {
    let mut o = Outcome::new(6, "oracle accounting");
    for (name, g) in small_graphs() {
        for t in [0usize, 1, 7, 25] {
            let mut ctr = OracleCounter::new();
            run(0, &g, &HadamardCoin, t, &mut ctr).unwrap();
            o.check(
                ctr.quantum_calls == 2 * t as u64,
                format!("{name}: coined {t} steps"),
            );
        }
        for j in [1usize, 4, 9] {
            let plan = TrotterPlan::new(1.0, 0.5, j, TrotterOrdering::Interleaved).unwrap();
            let mut ctr = OracleCounter::new();
            trotter_run(&g, 0, &plan, &mut ctr).unwrap();
            o.check(
                ctr.quantum_calls == (2 * g.n() * j) as u64,
                format!("{name}: trotter j = {j}"),
            );
        }
        let mut ctr = OracleCounter::new();
        sample_walk_seeded(&g, 0, 0.5, 123, 7, &mut ctr).unwrap();
        o.check(
            ctr.classical_queries == 123,
            format!("{name}: one query per sampled step"),
        );
    }

    let n = 8;
    let k8 = Graph::generate(&GraphKind::Complete { size: n }).unwrap();
    let (alpha, steps) = (0.6, 100_000usize);
    let traj = sample_walk_seeded(&k8, 0, alpha, steps, 11, &mut OracleCounter::new()).unwrap();
    let rate = move_count(&traj) as f64 / steps as f64;
    let expected = alpha * (n - 1) as f64 / n as f64;
    let sigma = (expected * (1.0 - expected) / steps as f64).sqrt();
    let z = (rate - expected) / sigma;
    o.check(
        z.abs() < 3.0,
        format!("K8 move rate {rate:.5} vs {expected:.5} ({z:+.2} sigma)"),
    );
    o.details = vec![format!(
        "exact 2t, 2Nj and per-step counts on {} graphs; K8 move rate {z:+.2} sigma",
        small_graphs().len()
    )];
    o
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::new(7, "classical limit");
    let g = Graph::generate(&GraphKind::Cycle { size: 8 }).unwrap();
    let p0 = ProbDist::point_mass(8, 0);
    let exact = continuous_evolve(&g, &p0, 1.0, 1.0).unwrap();
    let errs: Vec<f64> = [16usize, 32, 64, 128]
        .iter()
        .map(|&m| {
            let e = euler_evolve(&g, &p0, 1.0, 1.0, m).unwrap();
            e.as_slice()
                .iter()
                .zip(exact.as_slice())
                .map(|(a, b)| (a - b).abs())
                .sum()
        })
        .collect();
    let ratios: Vec<f64> = errs.windows(2).map(|w| w[1] / w[0]).collect();
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.3}")).collect();
    o.check(
        ratios.iter().all(|&r| r <= 0.6),
        format!(
            "C8 L1 error ratios [{}], err(128) = {:.2e}",
            shown.join(", "),
            errs[3]
        ),
    );
    o
}

fn criterion_8() -> Outcome {
    let mut o = Outcome::new(8, "naive adjacency operator is not unitary");
    for (name, g) in [
        (
            "C4",
            Graph::generate(&GraphKind::Cycle { size: 4 }).unwrap(),
        ),
        ("K2", Graph::new(2, &[(0, 1)]).unwrap()),
    ] {
        let d = naive_adjacency_operator(&g, 1.0, &BTreeMap::new()).unitarity_defect;
        o.check(d > 0.1, format!("{name}: defect {d:.4}"));
    }
    o
}

fn qwalk(dir: &Path, args: &[&str]) -> bool {
    Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .current_dir(dir)
        .args(args)
        .output()
        .map(|out| out.status.success())
        .unwrap_or(false)
}

fn criterion_9() -> Outcome {
    let mut o = Outcome::new(9, "determinism");
    let runs: [&[&str]; 5] = [
        &[
            "gen",
            "glued-trees",
            "--depth",
            "3",
            "--seed",
            "7",
            "-o",
            "OUT.json",
        ],
        &["gen", "random", "8", "0.4", "--seed", "1", "-o", "OUT.json"],
        &[
            "run",
            "--gen",
            "random:10:0.4:5",
            "--kind",
            "classical-sample",
            "--alpha",
            "0.7",
            "--steps",
            "200",
            "--trajectories",
            "40",
            "--seed",
            "9",
            "--csv",
            "OUT.csv",
            "--report",
            "OUT.json",
        ],
        &[
            "run",
            "--gen",
            "glued_trees:2:4",
            "--kind",
            "coined",
            "--steps",
            "30",
            "--coin",
            "grover",
            "--csv",
            "OUT.csv",
            "--report",
            "OUT.json",
        ],
        &[
            "run", "--gen", "cycle:8", "--kind", "trotter", "--gamma", "1", "--time", "1",
            "--slices", "16", "--csv", "OUT.csv", "--report", "OUT.json",
        ],
    ];
    for args in runs {
        let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
        let mut ok = true;
        for d in &dirs {
            ok &= qwalk(d.path(), args);
        }
        let files: Vec<&str> = args
            .iter()
            .filter(|a| a.starts_with("OUT."))
            .copied()
            .collect();
        for f in &files {
            let a = fs::read(dirs[0].path().join(f));
            let b = fs::read(dirs[1].path().join(f));
            ok &= matches!((a, b), (Ok(a), Ok(b)) if a == b && !a.is_empty());
        }
        o.check(
            ok,
            format!(
                "{} {}: byte-identical {}",
                args[0],
                args[1],
                files.join(", ")
            ),
        );
    }
    o
}

fn main() {
    let start = Instant::now();
    let criteria: [fn() -> Outcome; 9] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
    ];
    let mut unexpected = Vec::new();
    for criterion in criteria {
        let t = Instant::now();
        let o = criterion();
        let status = if o.passed() { "PASS" } else { "FAIL" };
        let summary = if o.passed() {
            o.details.join("; ")
        } else {
            format!(
                "failed: {} | held: {}",
                o.failures.join("; "),
                o.details.join("; ")
            )
        };
        println!(
            "criterion {} [{status}] {}: {summary} ({:.1}s)",
            o.id,
            o.title,
            t.elapsed().as_secs_f64()
        );
        let known = KNOWN_RED.contains(&o.id);
        if !o.passed() && known {
            println!("    known red, see the decisions notes");
        }
        if o.passed() == known {
            unexpected.push(o.id);
        }
    }
    println!(
        "acceptance finished in {:.1}s",
        start.elapsed().as_secs_f64()
    );
    if !unexpected.is_empty() {
        eprintln!("criteria with an unexpected outcome: {unexpected:?}");
        std::process::exit(1);
    }
}
