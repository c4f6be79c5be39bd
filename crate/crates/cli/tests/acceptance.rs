//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test -p simplex-forge --test acceptance -- --nocapture`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};
use std::time::Instant;

use simplex_core::linalg::{MatN, VecN};
use simplex_core::random::{random_feasible_lengths, random_main, random_positive_loop, random_signed_loop};
use simplex_core::{
    check_inequalities, cofactor_matrix, edge_map, facet_map, facet_normals, invert_facet_map,
    make_loop, realize_facet_vectors, realize_point_chain, realize_simplex, similarity_iterate,
    vector_product, Error, Role, SplitMix64, VolumeSpec,
};
use simplex_forge::{export_off, parse_job, parse_off, run_job, Status};

/// Relative tolerance for algebraic identities.
const IDENTITY_TOL: f64 = 1e-9;
const CLOSURE_TOL: f64 = 1e-10;
const ROUND_TRIP_TOL: f64 = 1e-8;
const PIPELINE_TOL: f64 = 1e-8;
const HAND_TOL: f64 = 1e-12;
const ANGLE_TOL: f64 = 1e-9;
const MARGIN_TOL: f64 = 1e-12;
const GRAM_GAP: f64 = 1e-3;
const TRIALS: u64 = 500;
const REALIZE_TRIALS: u64 = 1000;
const TIME_BUDGET_SECS: f64 = 60.0;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Leibniz determinant, independent of the LU path under test.
fn leibniz(m: &MatN) -> f64 {
    fn go(perm: &mut [usize], k: usize, m: &MatN, sign: f64, acc: &mut f64) {
        let n = perm.len();
        if k == n {
            *acc += sign * (0..n).map(|i| m.get(i, perm[i])).product::<f64>();
            return;
        }
        for i in k..n {
            perm.swap(k, i);
            go(perm, k + 1, m, if i == k { sign } else { -sign }, acc);
            perm.swap(k, i);
        }
    }
    let mut perm: Vec<usize> = (0..m.dim()).collect();
    let mut acc = 0.0;
    go(&mut perm, 0, m, 1.0, &mut acc);
    acc
}

/// Gaussian elimination with complete pivoting on a row-major copy; cheap
/// enough for n = 8, where the permutation sum is not.
fn elimination_det(m: &MatN) -> f64 {
    let n = m.dim();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j)).collect()).collect();
    let mut det = 1.0;
    for k in 0..n {
        let (mut pi, mut pj) = (k, k);
        for i in k..n {
            for j in k..n {
                if a[i][j].abs() > a[pi][pj].abs() {
                    (pi, pj) = (i, j);
                }
            }
        }
        if a[pi][pj] == 0.0 {
            return 0.0;
        }
        if pi != k {
            a.swap(pi, k);
            det = -det;
        }
        if pj != k {
            for row in a.iter_mut() {
                row.swap(pj, k);
            }
            det = -det;
        }
        det *= a[k][k];
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot = &top[k];
        for row in rest {
            let f = row[k] / pivot[k];
            for (x, p) in row[k..].iter_mut().zip(&pivot[k..]) {
                *x -= f * p;
            }
        }
    }
    det
}

/// Product of the `k` largest vector norms: a Hadamard bound on any
/// k-fold minor built from these vectors.
fn hadamard(vs: &[VecN], k: usize) -> f64 {
    let mut norms: Vec<f64> = vs.iter().map(VecN::norm).collect();
    norms.sort_by(|a, b| b.total_cmp(a));
    norms.iter().take(k).product::<f64>().max(f64::MIN_POSITIVE)
}

fn minor_bound(m: &MatN) -> f64 {
    hadamard(&m.columns(), m.dim() - 1)
}

fn matrix(n: usize, rng: &mut SplitMix64) -> MatN {
    MatN::from_columns(&random_main(n, rng)).unwrap()
}

fn dist(a: &VecN, b: &VecN) -> f64 {
    (a - b).norm()
}

fn cofactor_suite() -> Outcome {
    let mut rng = SplitMix64::new(1);
    let mut worst = 0.0f64;
    for n in 2..=6 {
        for t in 0..TRIALS {
            let m = matrix(n, &mut rng);
            let other = matrix(n, &mut rng);
            let lambda = rng.uniform(-3.0, 3.0);
            let c = cofactor_matrix(&m);
            let d = leibniz(&m);
            let e = MatN::identity(n).scaled(d);
            let k = n as i32;
            let prod_scale = hadamard(&c.columns(), 1) * hadamard(&m.columns(), 1) * n as f64;
            let checks = [
                (c.mul(&m.transpose()).sub(&e).max_abs(), prod_scale),
                (m.transpose().mul(&c).sub(&e).max_abs(), prod_scale),
                (
                    (leibniz(&c) - d.powi(k - 1)).abs(),
                    hadamard(&c.columns(), n),
                ),
                (
                    cofactor_matrix(&m.scaled(lambda))
                        .sub(&c.scaled(lambda.powi(k - 1)))
                        .max_abs(),
                    minor_bound(&m.scaled(lambda)),
                ),
                (
                    cofactor_matrix(&m.mul(&other))
                        .sub(&c.mul(&cofactor_matrix(&other)))
                        .max_abs(),
                    minor_bound(&m.mul(&other))
                        .max(n as f64 * minor_bound(&m) * minor_bound(&other)),
                ),
                (
                    cofactor_matrix(&c).sub(&m.scaled(d.powi(k - 2))).max_abs(),
                    minor_bound(&c),
                ),
            ];
            for (i, (err, scale)) in checks.iter().enumerate() {
                let rel = err / scale;
                worst = worst.max(rel);
                ensure(rel <= IDENTITY_TOL, || {
                    format!("n={n} trial={t} identity {i}: rel {rel:.3e}")
                })?;
            }
        }
    }
    Ok(format!("worst relative error {worst:.2e}"))
}

fn vector_product_suite() -> Outcome {
    let mut rng = SplitMix64::new(2);
    let mut worst = 0.0f64;
    for n in 2..=6 {
        for t in 0..TRIALS {
            let ws: Vec<VecN> = random_main(n, &mut rng).into_iter().take(n - 1).collect();
            let r = vector_product(&ws).unwrap();
            let bound = hadamard(&ws, n - 1);
            let mut note = |what: &str, rel: f64| {
                worst = worst.max(rel);
                ensure(rel <= IDENTITY_TOL, || format!("n={n} trial={t} {what}: rel {rel:.3e}"))
            };
            for w in &ws {
                note("orthogonality", w.dot(&r).abs() / (w.norm() * bound))?;
            }
            let mut with_r = vec![r.clone()];
            with_r.extend(ws.iter().cloned());
            let det = leibniz(&MatN::from_columns(&with_r).unwrap());
            note("norm identity", (det - r.dot(&r)).abs() / (bound * bound))?;
            if n >= 3 {
                let i = (rng.next_u64() % (n as u64 - 1)) as usize;
                let j = (i + 1 + (rng.next_u64() % (n as u64 - 2)) as usize) % (n - 1);
                let mut swapped = ws.clone();
                swapped.swap(i, j);
                let rs = vector_product(&swapped).unwrap();
                note("alternating", (&rs + &r).norm_inf() / bound)?;
                let mut repeated = ws.clone();
                repeated[j] = repeated[i].clone();
                note("repeated argument", vector_product(&repeated).unwrap().norm_inf() / bound)?;
            }
        }
    }
    Ok(format!("worst relative error {worst:.2e}"))
}

fn scalar_product_table() -> Outcome {
    let mut rng = SplitMix64::new(3);
    let mut worst = 0.0f64;
    for n in 2..=6 {
        for t in 0..TRIALS {
            let v = random_signed_loop(n, &mut rng).unwrap();
            let w = edge_map(&v);
            let z = facet_map(&w);
            let det_w = leibniz(&w.main_part());
            let det_v = leibniz(&v.main_part());
            let det_z = leibniz(&z.main_part());
            let scale = hadamard(w.vectors(), n);
            let mut note = |what: String, rel: f64| {
                worst = worst.max(rel);
                ensure(rel <= IDENTITY_TOL, || format!("n={n} trial={t} {what}: rel {rel:.3e}"))
            };
            for p in 0..=n {
                for q in 0..=n {
                    let expect = if p == q {
                        det_w
                    } else if p == (q + 1) % (n + 1) {
                        -det_w
                    } else {
                        0.0
                    };
                    let got = w.vector(p).dot(z.vector(q));
                    note(format!("<w{p},z{q}>"), (got - expect).abs() / scale)?;
                }
            }
            note("det W".into(), (det_w - (n + 1) as f64 * det_v).abs() / scale)?;
            let z_scale = hadamard(&z.vectors()[1..], n).max(scale.powi(n as i32 - 1));
            note("det Z".into(), (det_z - det_w.powi(n as i32 - 1)).abs() / z_scale)?;
        }
    }
    Ok(format!("worst relative error {worst:.2e}"))
}

fn iteration_identity() -> Outcome {
    let mut rng = SplitMix64::new(4);
    let mut worst = 0.0f64;
    let mut negatives = 0;
    for n in 2..=6 {
        for t in 0..TRIALS {
            let v = random_signed_loop(n, &mut rng).unwrap();
            let det_v = leibniz(&v.main_part());
            if det_v < 0.0 {
                negatives += 1;
            }
            let once = facet_map(&edge_map(&v));
            let twice_edges = edge_map(&once);
            let twice = facet_map(&twice_edges);
            let kappa = ((n + 1) as f64).powi(n as i32 - 1) * det_v.powi(n as i32 - 2);
            let err = twice.max_abs_diff(&v.scaled(kappa));
            let scale = (kappa.abs() * v.max_abs()).max(hadamard(twice_edges.vectors(), n - 1));
            let rel = err / scale;
            worst = worst.max(rel);
            ensure(rel <= IDENTITY_TOL, || format!("n={n} trial={t}: rel {rel:.3e}"))?;
        }
    }
    ensure(negatives > 0, || "no negative-determinant loops drawn".into())?;
    let hand = make_loop(
        vec![
            VecN::new(vec![1.0, 1.0]).unwrap(),
            VecN::new(vec![-1.0, 0.0]).unwrap(),
            VecN::new(vec![0.0, -1.0]).unwrap(),
        ],
        Role::Vertex,
    )
    .unwrap();
    let (image, report) = similarity_iterate(&hand);
    ensure((report.kappa - 3.0).abs() <= HAND_TOL, || format!("hand kappa {}", report.kappa))?;
    ensure(image.max_abs_diff(&hand.scaled(3.0)) <= HAND_TOL, || {
        "hand case image is not 3V".into()
    })?;
    Ok(format!("worst {worst:.2e}, {negatives} negative loops, hand kappa 3"))
}

fn facet_closure_and_inequalities() -> Outcome {
    let mut rng = SplitMix64::new(5);
    let mut worst = 0.0f64;
    for n in 2..=6 {
        for t in 0..TRIALS {
            let v = random_positive_loop(n, &mut rng);
            let z = facet_normals(&v);
            let norms = z.norms();
            let total: f64 = norms.iter().sum();
            let max = norms.iter().copied().fold(0.0, f64::max);
            let sum = z.vectors().iter().fold(VecN::zeros(n), |a, x| &a + x);
            let rel = sum.norm() / max;
            worst = worst.max(rel);
            ensure(rel <= CLOSURE_TOL, || format!("n={n} trial={t}: closure {rel:.3e}"))?;
            ensure(2.0 * max < total, || format!("n={n} trial={t}: 2max >= sum"))?;
        }
    }
    Ok(format!("worst relative closure {worst:.2e}"))
}

fn realization() -> Outcome {
    let mut rng = SplitMix64::new(6);
    let mut worst_len = 0.0f64;
    let mut worst_closure = 0.0f64;
    for n in 2..=8 {
        for t in 0..REALIZE_TRIALS {
            let lengths = random_feasible_lengths(n, &mut rng);
            let z = realize_facet_vectors(&VolumeSpec::new(lengths.clone()))
                .map_err(|e| format!("n={n} trial={t}: {e}"))?;
            for (k, (got, want)) in z.norms().iter().zip(&lengths).enumerate() {
                let rel = (got - want).abs() / want;
                worst_len = worst_len.max(rel);
                ensure(rel <= IDENTITY_TOL, || {
                    format!("n={n} trial={t} length {k}: rel {rel:.3e}")
                })?;
            }
            let max = lengths.iter().copied().fold(0.0, f64::max);
            let sum = z.vectors().iter().fold(VecN::zeros(n), |a, x| &a + x);
            let closure = sum.norm() / max;
            worst_closure = worst_closure.max(closure);
            ensure(closure <= CLOSURE_TOL, || format!("n={n} trial={t}: closure {closure:.3e}"))?;
            let det = elimination_det(&z.main_part());
            ensure(det > 0.0, || format!("n={n} trial={t}: det {det:e}"))?;
        }
    }

    let z = realize_facet_vectors(&VolumeSpec::new(vec![1.0; 3])).map_err(|e| e.to_string())?;
    for i in 0..3 {
        for j in i + 1..3 {
            let (a, b) = (z.vector(i), z.vector(j));
            let angle = (a.dot(b) / (a.norm() * b.norm())).clamp(-1.0, 1.0).acos();
            ensure((angle - 2.0 * PI / 3.0).abs() <= ANGLE_TOL, || {
                format!("(1,1,1): angle {i},{j} = {angle}")
            })?;
        }
    }
    ensure(leibniz(&z.main_part()) > 0.0, || "(1,1,1): det <= 0".into())?;

    let spec = VolumeSpec::new(vec![3.0, 4.0, 5.0, 6.0]).with_angles(vec![FRAC_PI_2]);
    let chain = realize_point_chain(&spec).map_err(|e| e.to_string())?;
    let p = &chain.points;
    let measured = [
        dist(&p[1], &p[0]),
        dist(&p[2], &p[1]),
        dist(&p[3], &p[2]),
        dist(&p[0], &p[3]),
    ];
    for (got, want) in measured.iter().zip([4.0, 5.0, 6.0, 3.0]) {
        ensure((got - want).abs() <= HAND_TOL * 10.0, || {
            format!("(3,4,5,6) chain distances {measured:?}")
        })?;
    }
    let z = realize_facet_vectors(&spec).map_err(|e| e.to_string())?;
    for (got, want) in z.norms().iter().zip([3.0, 4.0, 5.0, 6.0]) {
        ensure((got - want).abs() <= IDENTITY_TOL * want, || {
            format!("(3,4,5,6) loop lengths {:?}", z.norms())
        })?;
    }
    Ok(format!(
        "worst length error {worst_len:.2e}, worst closure {worst_closure:.2e}"
    ))
}

fn infeasible_rejection() -> Outcome {
    for lengths in [vec![1.0, 2.0, 3.0], vec![1.0, 1.0, 1.0, 3.0]] {
        let report = check_inequalities(&lengths).map_err(|e| e.to_string())?;
        ensure(!report.feasible, || format!("{lengths:?} reported feasible"))?;
        ensure(report.margin.abs() <= MARGIN_TOL, || {
            format!("{lengths:?}: margin {}", report.margin)
        })?;
        match realize_facet_vectors(&VolumeSpec::new(lengths.clone())) {
            Err(Error::InfeasibleInput { margin, .. }) if margin.abs() <= MARGIN_TOL => {}
            other => return Err(format!("{lengths:?}: realize gave {other:?}")),
        }
        let text = format!(r#"{{"command":"realize","lengths":{lengths:?}}}"#);
        let result = run_job(&parse_job(&text).map_err(|e| e.to_string())?);
        ensure(result.status == Status::Infeasible, || {
            format!("{lengths:?}: job status {:?}", result.status)
        })?;
        ensure(result.status.exit_code() == 2, || "exit code is not 2".into())?;
    }
    Ok("both boundary tuples rejected with zero margin".into())
}

fn inversion() -> Outcome {
    let mut rng = SplitMix64::new(8);
    let mut worst = 0.0f64;
    for n in 2..=6 {
        for t in 0..TRIALS {
            let v = random_positive_loop(n, &mut rng);
            let z = facet_normals(&v);
            let back = invert_facet_map(&z).map_err(|e| format!("n={n} trial={t}: {e}"))?;
            let rel = back.max_abs_diff(&v) / v.max_abs();
            worst = worst.max(rel);
            ensure(rel <= ROUND_TRIP_TOL, || format!("n={n} trial={t}: rel {rel:.3e}"))?;
        }
    }

    let lengths = [3.0, 4.0, 5.0, 6.0];
    let r = realize_simplex(&VolumeSpec::new(lengths.to_vec())).map_err(|e| e.to_string())?;
    let normals = facet_normals(&r.vertices);
    for (got, want) in normals.norms().iter().zip(lengths) {
        ensure((got - want).abs() <= PIPELINE_TOL * want, || {
            format!("pipeline facet lengths {:?}", normals.norms())
        })?;
    }
    let off = export_off(&r).map_err(|e| e.to_string())?;
    let mesh = parse_off(&off).map_err(|e| e.to_string())?;
    ensure(mesh.vertices.len() == 4 && mesh.faces.len() == 4, || {
        format!("OFF has {} vertices, {} faces", mesh.vertices.len(), mesh.faces.len())
    })?;
    ensure(off.lines().nth(1) == Some("4 4 6"), || "bad OFF count line".into())?;
    for (k, want) in lengths.iter().enumerate() {
        let area = mesh.face_area(k);
        ensure((2.0 * area - want).abs() <= PIPELINE_TOL * want, || {
            format!("OFF face {k} area {area}")
        })?;
    }
    Ok(format!("worst round trip {worst:.2e}; pipeline and OFF ok"))
}

fn multiplicity() -> Outcome {
    let lengths = vec![1.0, 1.2, 1.5, 1.7, 2.0];
    let a = realize_facet_vectors(&VolumeSpec::new(lengths.clone()).with_angles(vec![FRAC_PI_2, FRAC_PI_2]))
        .map_err(|e| e.to_string())?;
    let b = realize_facet_vectors(&VolumeSpec::new(lengths).with_angles(vec![FRAC_PI_3, FRAC_PI_2]))
        .map_err(|e| e.to_string())?;
    let (mut na, mut nb) = (a.norms(), b.norms());
    na.sort_by(f64::total_cmp);
    nb.sort_by(f64::total_cmp);
    for (x, y) in na.iter().zip(&nb) {
        ensure((x - y).abs() <= IDENTITY_TOL, || format!("length multisets differ: {na:?} vs {nb:?}"))?;
    }
    let gap = a
        .gram()
        .iter()
        .flatten()
        .zip(b.gram().iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    ensure(gap >= GRAM_GAP, || format!("Gram matrices differ by only {gap:.3e}"))?;
    Ok(format!("max Gram difference {gap:.3}"))
}

fn determinism() -> Outcome {
    for text in [
        r#"{"command":"realize","lengths":[1.0,1.3,1.7,2.0,2.2,2.9],"seed":17}"#,
        r#"{"command":"realize","lengths":[3,4,5,6],"unit":"facet"}"#,
        r#"{"command":"random","dimension":6,"seed":123}"#,
        r#"{"command":"invert","loop":[[2,0,0],[-1,1,0],[0,-1,1],[-1,0,-1]]}"#,
        r#"{"command":"check","lengths":[1,2,3]}"#,
    ] {
        let first = run_job(&parse_job(text).map_err(|e| e.to_string())?).to_json();
        let second = run_job(&parse_job(text).map_err(|e| e.to_string())?).to_json();
        ensure(first.as_bytes() == second.as_bytes(), || format!("output differs for {text}"))?;
    }
    Ok("five jobs reproduced byte for byte".into())
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let criteria: [Criterion; 10] = [
        ("1 cofactor identities", cofactor_suite),
        ("2 vector product", vector_product_suite),
        ("3 scalar-product table", scalar_product_table),
        ("4 iteration identity", iteration_identity),
        ("5 facet closure and inequalities", facet_closure_and_inequalities),
        ("6 realization", realization),
        ("7 infeasible rejection", infeasible_rejection),
        ("8 inversion and pipeline", inversion),
        ("9 multiplicity", multiplicity),
        ("10 determinism", determinism),
    ];
    let mut failures = Vec::new();
    for (name, check) in criteria {
        let t0 = Instant::now();
        let outcome = check();
        let secs = t0.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} [{secs:.2}s]"),
            Err(why) => {
                println!("FAIL  {name}: {why} [{secs:.2}s]");
                failures.push(name);
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let timed = if elapsed < TIME_BUDGET_SECS { "PASS" } else { "FAIL" };
    println!("{timed}  suite runtime: {elapsed:.2}s (budget {TIME_BUDGET_SECS}s)");
    if elapsed >= TIME_BUDGET_SECS {
        failures.push("runtime");
    }
    assert!(failures.is_empty(), "failed: {failures:?}");
}
