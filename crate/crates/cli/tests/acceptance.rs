//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! with the measured residuals (visible with `--nocapture`).
//!
//! Criteria pin the library against its contract end to end: closed-form
//! Hamiltonian reproduction, Yang-Baxter certification of every ansatz,
//! presentation-relation classification, the RTT/ABCD exchange algebra,
//! commuting transfer matrices and charges, the deformed-model structure,
//! the discrepancy protocol, and byte-level report determinism.

use std::time::{Duration, Instant};

use loopbraid::chain;
use loopbraid::linalg::{embed_pair, kron, residual, DenseOperator};
use loopbraid::relations::{self, GroupClass, RelationId};
use loopbraid::reps::{
    self, build_b, build_projector, pauli, pauli_decompose_two_site, BChoice, Pauli,
    ProjectorParams, RepresentationParams,
};
use loopbraid::rmatrix::{self, AbcdIndices, RMatrixSpec, YbeConvention};
use loopbraid::rng::CounterRng;
use loopbraid::spectral::SpectralPolynomial;
use loopbraid::{ChainGeometry, Complex64 as C64, GeneratorFamily};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn report(number: u32, name: &str, ok: bool, details: &str, elapsed: Duration) {
    println!(
        "criterion {:02} ({name}): {} ({details}) [{:.2?}]",
        number,
        if ok { "PASS" } else { "FAIL" },
        elapsed
    );
}

fn random_projector(rng: &mut CounterRng) -> ProjectorParams {
    ProjectorParams::from_lm(rng.next_complex(0.3), rng.next_complex(0.3))
}

fn isotropic_oracle(cc: C64, n: usize) -> DenseOperator {
    // (2/(3c)) sum_k (XX + YY + ZZ) on bonds (k+1, k), built directly
    let mut bond = DenseOperator::zeros(4);
    for p in [Pauli::X, Pauli::Y, Pauli::Z] {
        bond = bond.add(&kron(&pauli(p), &pauli(p)).unwrap()).unwrap();
    }
    let bond = bond.scale(c(2.0, 0.0) / (c(3.0, 0.0) * cc));
    let mut h = DenseOperator::zeros(1 << n);
    for k in 1..=n {
        let kp1 = if k == n { 1 } else { k + 1 };
        h = h.add(&embed_pair(&bond, kp1, k, n).unwrap()).unwrap();
    }
    h
}

#[test]
fn criterion_01_isotropic_chain_reproduction() {
    let started = Instant::now();
    let spec = RMatrixSpec::Rational { c: c(1.0, 0.0) };
    let mut worst: f64 = 0.0;
    for n in [3usize, 4] {
        let h = chain::local_hamiltonian(&spec, c(0.5, 0.0), n).unwrap();
        worst = worst.max(residual(&h, &isotropic_oracle(c(1.0, 0.0), n)).unwrap());
    }
    let elapsed = started.elapsed();
    let ok = worst <= 1e-12 && elapsed < Duration::from_secs(1);
    report(
        1,
        "isotropic-chain reproduction",
        ok,
        &format!("worst residual {worst:.3e}, n in {{3,4}}"),
        elapsed,
    );
    assert!(ok, "residual {worst:.3e} or runtime {elapsed:.2?} out of bounds");
}

#[test]
fn criterion_02_rational_yang_baxter() {
    let started = Instant::now();
    let mut rng = CounterRng::new(1002);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let spec = RMatrixSpec::Rational {
            c: rng.next_complex(1.5),
        };
        let (u, v) = (rng.next_complex(1.5), rng.next_complex(1.5));
        worst = worst.max(
            rmatrix::ybe_residual(&spec, YbeConvention::StandardSum, u, v).unwrap(),
        );
    }
    let elapsed = started.elapsed();
    let ok = worst <= 1e-12 && elapsed < Duration::from_secs(1);
    report(
        2,
        "rational Yang-Baxter",
        ok,
        &format!("worst residual {worst:.3e} over 100 draws"),
        elapsed,
    );
    assert!(ok);
}

#[test]
fn criterion_03_symmetric_loop_braid_certification() {
    let started = Instant::now();
    let mut rng = CounterRng::new(1003);
    let mut choices = vec![BChoice::ZzHalf];
    for _ in 0..5 {
        choices.push(BChoice::ProductProjector(random_projector(&mut rng)));
    }
    let geometry = ChainGeometry::new(4).unwrap();
    let mut worst: f64 = 0.0;
    for trial in 0..20 {
        let alpha = loop {
            let a = rng.next_complex(2.0);
            if (a + c(1.0, 0.0)).norm() > 0.05 {
                break a;
            }
        };
        let choice = choices[trial % choices.len()].clone();
        let fam = GeneratorFamily::from_params(
            &RepresentationParams::new(alpha, choice),
            geometry,
        )
        .unwrap();
        let rel_report = relations::classify(&fam).unwrap();
        assert_eq!(rel_report.classification, GroupClass::SymmetricLoopBraid);
        assert!(rel_report.m4_satisfied);
        worst = worst.max(rel_report.max_residual());
    }

    // non-swap-invariant control: (I - ZZ)/2 must break a mixed relation
    let zz = kron(&pauli(Pauli::Z), &pauli(Pauli::Z)).unwrap();
    let bad = DenseOperator::identity(4).sub(&zz).unwrap().scale(c(0.5, 0.0));
    let fam = GeneratorFamily::from_params(
        &RepresentationParams::new(c(0.6, 0.0), BChoice::Raw(bad)),
        geometry,
    )
    .unwrap();
    let control = relations::check_relation(&fam, RelationId::M3).unwrap();

    let elapsed = started.elapsed();
    let ok = worst <= 1e-11 && control.residual > 1e-3 && elapsed < Duration::from_secs(10);
    report(
        3,
        "symmetric-loop-braid certification",
        ok,
        &format!(
            "worst residual {worst:.3e} over 20 draws; control M3 residual {:.3e}",
            control.residual
        ),
        elapsed,
    );
    assert!(ok);
}

#[test]
fn criterion_04_braided_identity_with_free_coefficients() {
    let started = Instant::now();
    let mut rng = CounterRng::new(1004);
    let choices = [
        BChoice::ZzHalf,
        BChoice::ProductProjector(
            ProjectorParams::new(c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)).unwrap(),
        ),
        BChoice::ProductProjector(random_projector(&mut rng)),
    ];
    let mut worst: f64 = 0.0;
    for choice in choices {
        let spec = RMatrixSpec::A1 {
            params: RepresentationParams::new(c(0.8, 0.3), choice),
            a_fn: SpectralPolynomial::linear(c(1.0, 0.0)),
        };
        for _ in 0..50 {
            let (a1, a2, a3) = (
                rng.next_complex(1.0),
                rng.next_complex(1.0),
                rng.next_complex(1.0),
            );
            worst = worst.max(
                rmatrix::ybe_residual_free_coeffs(&spec, a1, a2, a3).unwrap(),
            );
        }
    }
    let elapsed = started.elapsed();
    let ok = worst <= 1e-11 && elapsed < Duration::from_secs(5);
    report(
        4,
        "braided identity with free coefficients",
        ok,
        &format!("worst residual {worst:.3e} over 3 x 50 triples"),
        elapsed,
    );
    assert!(ok);
}

#[test]
fn criterion_05_deformed_model_yang_baxter() {
    let started = Instant::now();
    let mut rng = CounterRng::new(1005);
    let models = [
        BChoice::ProductProjector(
            ProjectorParams::new(c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)).unwrap(),
        ),
        BChoice::ZzHalf,
    ];
    // difference-argument (braided) pattern: the identity this family
    // satisfies; the standard leg pattern fails and is reported elsewhere
    let mut worst: f64 = 0.0;
    for choice in &models {
        for _ in 0..50 {
            let alpha = rng.next_complex(1.0);
            let spec = RMatrixSpec::deformed_model(RepresentationParams::new(
                alpha,
                choice.clone(),
            ));
            let (u, v) = (rng.next_complex(1.0), rng.next_complex(1.0));
            worst = worst.max(
                rmatrix::ybe_residual(&spec, YbeConvention::Braided, u, v).unwrap(),
            );
        }
    }

    // wrong slope control: b(u) = -alpha u instead of -2 alpha u
    let alpha = c(1.0, 0.0);
    let mut control: f64 = f64::INFINITY;
    for choice in &models {
        let spec = RMatrixSpec::A3 {
            params: RepresentationParams::new(alpha, choice.clone()),
            a_fn: SpectralPolynomial::linear(alpha),
            b_fn: SpectralPolynomial::linear(-alpha),
        };
        control = control.min(
            rmatrix::ybe_residual(&spec, YbeConvention::Braided, c(0.3, 0.0), c(0.1, 0.0))
                .unwrap(),
        );
    }

    let elapsed = started.elapsed();
    let ok = worst <= 1e-10 && control > 1e-3 && elapsed < Duration::from_secs(5);
    report(
        5,
        "deformed-model Yang-Baxter",
        ok,
        &format!("worst residual {worst:.3e}; wrong-slope control {control:.3e}"),
        elapsed,
    );
    assert!(ok);
}

#[test]
fn criterion_06_braid_power_identities() {
    let started = Instant::now();
    let mut rng = CounterRng::new(1006);
    let mut worst: f64 = 0.0;
    for trial in 0..20 {
        let alpha = rng.next_complex(1.5);
        let choice = if trial % 2 == 0 {
            BChoice::ZzHalf
        } else {
            BChoice::ProductProjector(random_projector(&mut rng))
        };
        let params = RepresentationParams::new(alpha, choice);
        let sigma = reps::build_sigma(&params).unwrap();
        let mut iterated = DenseOperator::identity(4);
        for exponent in 0..=6u32 {
            let closed = reps::sigma_power(&params, exponent).unwrap();
            worst = worst.max(residual(&closed, &iterated).unwrap());
            iterated = iterated.matmul(&sigma).unwrap();
        }
    }
    let elapsed = started.elapsed();
    let ok = worst <= 1e-10 && elapsed < Duration::from_secs(1);
    report(
        6,
        "braid power identities",
        ok,
        &format!("worst residual {worst:.3e}, exponents 0..=6, 20 draws"),
        elapsed,
    );
    assert!(ok);
}

#[test]
fn criterion_07_rtt_and_block_exchange_algebra() {
    let started = Instant::now();
    let spec = RMatrixSpec::Rational { c: c(1.0, 0.0) };
    let mut rng = CounterRng::new(1007);
    let mut worst: f64 = 0.0;
    for n in [2usize, 3] {
        for _ in 0..5 {
            let (u, mut v) = (rng.next_complex(1.0), rng.next_complex(1.0));
            while (u - v).norm() < 1e-2 {
                v = rng.next_complex(1.0);
            }
            worst = worst.max(
                rmatrix::rtt_residual(&spec, |x| chain::monodromy(&spec, x, n), n, u, v)
                    .unwrap(),
            );
            for idx in AbcdIndices::all() {
                worst = worst.max(rmatrix::abcd_residual(&spec, n, u, v, idx).unwrap());
            }
        }
    }
    let elapsed = started.elapsed();
    let ok = worst <= 1e-10 && elapsed < Duration::from_secs(5);
    report(
        7,
        "RTT and block exchange algebra",
        ok,
        &format!("worst residual {worst:.3e}, n in {{2,3}}, all 16 blocks"),
        elapsed,
    );
    assert!(ok);
}

#[test]
fn criterion_08_commuting_transfers_and_charges() {
    let started = Instant::now();
    let rational = RMatrixSpec::Rational { c: c(1.0, 0.0) };
    let a1 = RMatrixSpec::A1 {
        params: RepresentationParams::new(c(0.8, 0.0), BChoice::ZzHalf),
        a_fn: SpectralPolynomial::linear(c(2.0, 0.0)),
    };
    let a2 = RMatrixSpec::A2 {
        params: RepresentationParams::new(c(0.3, 0.0), BChoice::ZzHalf),
        a_fn: SpectralPolynomial::linear(c(1.0, 0.0)),
    };
    let a3_axial = RMatrixSpec::deformed_model(RepresentationParams::new(
        c(0.5, 0.0),
        BChoice::ZzHalf,
    ));
    let mut rng = CounterRng::new(1008);
    let mut worst: f64 = 0.0;
    for (name, spec) in [
        ("rational", &rational),
        ("a1", &a1),
        ("a2", &a2),
        ("a3-axial", &a3_axial),
    ] {
        for n in 3..=6usize {
            for _ in 0..5 {
                let (u, v) = (rng.next_complex(1.0), rng.next_complex(1.0));
                let r = chain::transfer_commutator(spec, u, v, n).unwrap();
                assert!(r <= 1e-9, "{name} n={n}: {r}");
                worst = worst.max(r);
            }
        }
    }

    // the product-projector deformed model genuinely fails to commute at
    // n = 4; keep the boundary pinned
    let a3_generic = RMatrixSpec::deformed_model(RepresentationParams::new(
        c(0.5, 0.0),
        BChoice::ProductProjector(
            ProjectorParams::new(c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)).unwrap(),
        ),
    ));
    let boundary = chain::transfer_commutator(&a3_generic, c(1.1, 0.0), c(0.4, 0.0), 4).unwrap();
    assert!(boundary > 1e-4, "expected non-commutation, got {boundary:.3e}");

    let mut worst_charges: f64 = 0.0;
    for n in 2..=5usize {
        let fam = chain::extract_charges(&rational, c(0.5, 0.0), n).unwrap();
        worst_charges = worst_charges.max(fam.max_commutator);
        let fam = chain::extract_charges(&a2, c(0.0, 0.0), n).unwrap();
        worst_charges = worst_charges.max(fam.max_commutator);
    }

    let elapsed = started.elapsed();
    let ok = worst <= 1e-9 && worst_charges <= 1e-9 && elapsed < Duration::from_secs(60);
    report(
        8,
        "commuting transfers and charges",
        ok,
        &format!(
            "worst [T,T] {worst:.3e} (certified specs, n 3..6); worst charge pair \
             {worst_charges:.3e}; generic deformed model boundary {boundary:.3e}"
        ),
        elapsed,
    );
    assert!(ok);
}

#[test]
fn criterion_09_braid_chain_closed_form_equivalence() {
    let started = Instant::now();
    let mut rng = CounterRng::new(1009);
    let b = build_b(&BChoice::ZzHalf).unwrap();
    let a_fn = SpectralPolynomial::linear(c(1.0, 0.0));
    let mut worst: f64 = 0.0;
    let mut used = 0;
    while used < 20 {
        let alpha = rng.next_complex(1.0);
        let u = rng.next_complex(0.8);
        let one = c(1.0, 0.0);
        if (one + u).norm() < 0.2 || (one + (alpha + one) * u).norm() < 0.2 {
            continue;
        }
        used += 1;
        let spec = RMatrixSpec::A2 {
            params: RepresentationParams::new(alpha, BChoice::ZzHalf),
            a_fn: a_fn.clone(),
        };
        let derived = chain::local_hamiltonian(&spec, u, 4).unwrap();
        let closed = chain::closed_form_slb(&a_fn, alpha, &b, u, 4).unwrap();
        worst = worst.max(residual(&derived, &closed).unwrap());
    }
    let elapsed = started.elapsed();
    let ok = worst <= 1e-11 && elapsed < Duration::from_secs(5);
    report(
        9,
        "braid-chain closed-form equivalence",
        ok,
        &format!("worst residual {worst:.3e} over 20 draws, n = 4"),
        elapsed,
    );
    assert!(ok);
}

#[test]
fn criterion_10_axial_model_structure_and_projector_table() {
    let started = Instant::now();
    let mut rng = CounterRng::new(1010);
    let b = build_b(&BChoice::ZzHalf).unwrap();
    let mut aniso = kron(&pauli(Pauli::X), &pauli(Pauli::X)).unwrap();
    aniso = aniso
        .add(&kron(&pauli(Pauli::Y), &pauli(Pauli::Y)).unwrap())
        .unwrap()
        .sub(&kron(&pauli(Pauli::Z), &pauli(Pauli::Z)).unwrap())
        .unwrap();

    // traceless part of each deformed bond is exactly proportional to
    // XX + YY - ZZ with the expected coefficient
    let mut worst: f64 = 0.0;
    let mut used = 0;
    while used < 20 {
        let alpha = rng.next_complex(1.0);
        let u = rng.next_complex(1.0);
        let one = c(1.0, 0.0);
        if (one - alpha * alpha * u * u).norm() < 0.1 {
            continue;
        }
        used += 1;
        let h = chain::closed_form_deformed(alpha, &b, u, 2).unwrap();
        let traceless = h
            .sub(&DenseOperator::identity(4).scale(h.trace() * c(0.25, 0.0)))
            .unwrap();
        // two bonds on two sites double the single-bond coefficient
        let coeff = alpha * (one - u) / (one - alpha * alpha * u * u);
        worst = worst.max(residual(&traceless, &aniso.scale(coeff)).unwrap());
    }

    // projector-pair Pauli table: coefficients are the outer product of
    // (1/2, l, m, n) with itself
    let mut worst_table: f64 = 0.0;
    for _ in 0..10 {
        let p = random_projector(&mut rng);
        let (l, m, n) = p.components();
        let proj = build_projector(&p);
        let table = pauli_decompose_two_site(&kron(&proj, &proj).unwrap()).unwrap();
        let weights = [c(0.5, 0.0), l, m, n];
        for a in 0..4 {
            for bb in 0..4 {
                worst_table = worst_table.max((table[a][bb] - weights[a] * weights[bb]).norm());
            }
        }
        // the bond builder runs the same verification internally
        chain::model1_term(&p, c(0.5, 0.0), c(0.3, 0.0)).unwrap();
    }

    let elapsed = started.elapsed();
    let ok = worst <= 1e-12 && worst_table <= 1e-12 && elapsed < Duration::from_secs(2);
    report(
        10,
        "axial model structure and projector table",
        ok,
        &format!("worst structure residual {worst:.3e}; worst table deviation {worst_table:.3e}"),
        elapsed,
    );
    assert!(ok);
}

#[test]
fn criterion_11_discrepancy_protocol() {
    let started = Instant::now();
    let mut rng = CounterRng::new(1011);
    let vs: Vec<C64> = (0..5).map(|_| rng.next_complex(1.0)).collect();
    let mut lines = Vec::new();
    let mut computed = true;
    for (name, choice) in [
        ("axial", BChoice::ZzHalf),
        (
            "projector",
            BChoice::ProductProjector(
                ProjectorParams::new(c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)).unwrap(),
            ),
        ),
    ] {
        let out =
            chain::deformed_discrepancy_protocol(c(0.5, 0.0), &choice, c(0.3, 0.0), 4, &vs)
                .unwrap();
        computed = computed
            && out.inverse_sum_residual.is_finite()
            && out.closed_form_commutators.len() == vs.len()
            && out.derived_commutators.len() == vs.len();
        let max_closed = out
            .closed_form_commutators
            .iter()
            .map(|(_, r)| *r)
            .fold(0.0, f64::max);
        let max_derived = out
            .derived_commutators
            .iter()
            .map(|(_, r)| *r)
            .fold(0.0, f64::max);
        lines.push(format!(
            "{name}: discrepancy==sum(R^-1) residual {:.3e} (matches: {}); \
             [H_closed,T] max {:.3e}; [H_derived,T] max {:.3e}",
            out.inverse_sum_residual, out.matches_inverse_sum, max_closed, max_derived
        ));
    }
    let elapsed = started.elapsed();
    // the criterion is that the comparison is computed and reported, not
    // that any particular outcome holds
    let ok = computed && elapsed < Duration::from_secs(10);
    report(
        11,
        "discrepancy protocol",
        ok,
        &lines.join(" | "),
        elapsed,
    );
    assert!(ok);
}

#[test]
fn criterion_12_report_determinism() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("config.toml");
    std::fs::write(
        &config_path,
        r#"
seed = 20260809

[spec]
ansatz = "a3"
alpha = "0.5"
b_choice = "zz-half"

[geometry]
n_sites = 4

[checks]
names = ["relations", "ybe", "transfer-commute", "hamiltonian", "spectrum", "diagnostic"]
u0 = "0.3"
samples = 5
"#,
    )
    .unwrap();

    let run = |out: &str| -> serde_json::Value {
        let out_dir = dir.path().join(out);
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_loopbraid"))
            .arg("run")
            .arg(&config_path)
            .arg(&out_dir)
            .output()
            .unwrap();
        assert!(
            status.status.success(),
            "run failed: {}",
            String::from_utf8_lossy(&status.stderr)
        );
        let text = std::fs::read_to_string(out_dir.join("report.json")).unwrap();
        serde_json::from_str(&text).unwrap()
    };

    let mut first = run("one");
    let mut second = run("two");
    first.as_object_mut().unwrap().remove("timings");
    second.as_object_mut().unwrap().remove("timings");
    let first_bytes = serde_json::to_string(&first).unwrap();
    let second_bytes = serde_json::to_string(&second).unwrap();

    let csv_one = std::fs::read(dir.path().join("one").join("spectrum.csv")).unwrap();
    let csv_two = std::fs::read(dir.path().join("two").join("spectrum.csv")).unwrap();

    let elapsed = started.elapsed();
    let ok = first_bytes == second_bytes && csv_one == csv_two;
    report(
        12,
        "report determinism",
        ok,
        &format!(
            "{} report bytes identical modulo timings; spectrum.csv identical",
            first_bytes.len()
        ),
        elapsed,
    );
    assert!(ok);
}
