use std::f64::consts::{PI, TAU};
use std::fs;
use std::path::Path;
use std::process::Command;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinsep::projections::{
    expand_spin_power, expansion_matrix, m2_map, m3_map, projection_from_diagonal, PhaseVector,
};
use spinsep::random::{mix_to_l1_norm, random_density};
use spinsep::{
    check_density, conjugate_by_permutation, cyclic_family_density, from_spin, is_projection_label, necessary_check,
    partial_transpose, peres_check, product_projection, spin_l1_norm, spin_matrix, spin_power, subgroup_projection,
    sufficient_certificate, tensor_all, to_spin, trace_inner, verify_decomposition, werner_density,
    werner_separable_decomposition, werner_spin_coeffs, werner_threshold, ComplexMatrix, DimVector, Permutation,
    ProductProjectionSpec, ProjectionSpec, RootOfUnity, SpinLabel, Tolerance, Verdict, WernerSpec,
};
use spinsep_cli::format::{to_json, CoefficientsFile, DecompositionFile, DensityFile};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn labels(d: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..d).flat_map(move |j| (0..d).map(move |k| (j, k)))
}

fn spin(d: usize, j: usize, k: usize) -> ComplexMatrix {
    spin_matrix(d, j, k).expect("valid label")
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Determinant of a matrix with exactly one nonzero entry per row and column.
fn monomial_det(m: &ComplexMatrix) -> Complex64 {
    let d = m.dim();
    let cols: Vec<usize> = (0..d)
        .map(|r| (0..d).find(|&k| m[(r, k)].norm() > 0.5).unwrap())
        .collect();
    let mut sign = 1.0;
    for a in 0..d {
        for b in a + 1..d {
            if cols[a] > cols[b] {
                sign = -sign;
            }
        }
    }
    (0..d).map(|r| m[(r, cols[r])]).product::<Complex64>() * sign
}

fn random_matrix(d: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

fn valid_labels(d: usize) -> Vec<SpinLabel> {
    labels(d)
        .map(|(j, k)| SpinLabel { j, k })
        .filter(|&u| is_projection_label(d, u))
        .collect()
}

fn is_trace_one_projection(p: &ComplexMatrix, eps: f64) -> bool {
    p.is_hermitian(eps) && (p * p).approx_eq(p, eps) && (p.trace() - 1.0).norm() <= eps
}

fn spin_algebra() -> Outcome {
    let tol = 1e-9;
    let mut checks = 0usize;
    for d in 2..=6 {
        let eta = |e: usize| RootOfUnity::eta_pow(d, e as i64).value();
        let z = spin(d, 1, 0);
        let x = spin(d, 0, 1);
        for (j, k) in labels(d) {
            let s = spin(d, j, k);
            ensure!(
                (&s * &s.adjoint()).approx_eq(&ComplexMatrix::identity(d), tol),
                "unitarity d={d} ({j},{k})"
            );
            if (j, k) != (0, 0) {
                ensure!(s.trace().norm() <= tol, "trace d={d} ({j},{k})");
            }
            let parity = if d % 2 == 1 || (j + k) % 2 == 0 { 1.0 } else { -1.0 };
            ensure!((monomial_det(&s) - parity).norm() <= tol, "determinant d={d} ({j},{k})");
            ensure!(
                (&z.pow(j as u32) * &x.pow(k as u32)).approx_eq(&s, tol),
                "generation d={d} ({j},{k})"
            );
            for (r, t) in labels(d) {
                let v = spin(d, r, t);
                let want = if (j, k) == (r, t) { d as f64 } else { 0.0 };
                ensure!(
                    (trace_inner(&s, &v).unwrap() - want).norm() <= tol,
                    "orthogonality d={d}"
                );
                let lhs = &(&s * &v) - &(&v * &s);
                let rhs = spin(d, (j + r) % d, (k + t) % d).scale(eta(k * r) - eta(j * t));
                ensure!(lhs.approx_eq(&rhs, tol), "commutator d={d} ({j},{k}) ({r},{t})");
                checks += 2;
            }
            let mut acc = ComplexMatrix::identity(d);
            for m in 0..=2 * d as u64 {
                let (phase, label) = spin_power(d, SpinLabel { j, k }, m);
                ensure!(
                    spin(d, label.j, label.k).scale(phase.value()).approx_eq(&acc, tol),
                    "power d={d} ({j},{k})^{m}"
                );
                acc = &acc * &s;
            }
        }
    }
    Ok(format!("d = 2..6, {checks} pair identities"))
}

fn qutrit_golden() -> Outcome {
    // Exponent of eta per entry, -1 for zero; S_{00}, S_{01}, ..., S_{22}.
    #[rustfmt::skip]
    let table: [[[i32; 3]; 3]; 9] = [
        [[0, -1, -1], [-1, 0, -1], [-1, -1, 0]],
        [[-1, 0, -1], [-1, -1, 0], [0, -1, -1]],
        [[-1, -1, 0], [0, -1, -1], [-1, 0, -1]],
        [[0, -1, -1], [-1, 1, -1], [-1, -1, 2]],
        [[-1, 0, -1], [-1, -1, 1], [2, -1, -1]],
        [[-1, -1, 0], [1, -1, -1], [-1, 2, -1]],
        [[0, -1, -1], [-1, 2, -1], [-1, -1, 1]],
        [[-1, 0, -1], [-1, -1, 2], [1, -1, -1]],
        [[-1, -1, 0], [2, -1, -1], [-1, 1, -1]],
    ];
    let eta = c(-0.5, 3f64.sqrt() / 2.0);
    let mut worst = 0.0f64;
    for (idx, rows) in table.iter().enumerate() {
        let s = spin(3, idx / 3, idx % 3);
        for (r, row) in rows.iter().enumerate() {
            for (col, &e) in row.iter().enumerate() {
                let want = if e < 0 { c(0.0, 0.0) } else { eta.powi(e) };
                worst = worst.max((s[(r, col)] - want).norm());
            }
        }
    }
    ensure!(worst <= 1e-12, "max deviation {worst:.3e}");
    Ok(format!("9 matrices, max deviation {worst:.1e}"))
}

fn transform_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst_rt = 0.0f64;
    let mut worst_l2 = 0.0f64;
    for shape in [vec![2, 2], vec![2, 3], vec![3, 3], vec![2, 2, 2]] {
        let dims = DimVector::new(shape.clone()).unwrap();
        let n = dims.total() as f64;
        for i in 0..100 {
            let rho = random_density(&dims, &mut rng);
            let coeffs = to_spin(&rho);
            let rt = from_spin(&coeffs).max_abs_diff(rho.matrix()).unwrap();
            worst_rt = worst_rt.max(rt);
            ensure!(rt <= 1e-10, "round trip {shape:?} #{i}: {rt:.3e}");
            ensure!((coeffs.get_flat(0, 0) - 1.0).norm() <= 1e-10, "s00 {shape:?} #{i}");
            ensure!(
                coeffs.conjugation_symmetry_defect() <= 1e-10,
                "conjugation symmetry {shape:?} #{i}"
            );
            let purity = trace_inner(rho.matrix(), rho.matrix()).unwrap().re;
            let spin_sq: f64 = coeffs.table().iter().map(|s| s.norm_sqr()).sum();
            let l2 = (spin_sq - n * purity).abs();
            worst_l2 = worst_l2.max(l2);
            ensure!(l2 <= 1e-9, "L2 identity {shape:?} #{i}: {l2:.3e}");
        }
    }
    Ok(format!("400 densities, round trip {worst_rt:.1e}, L2 {worst_l2:.1e}"))
}

fn projection_suite() -> Outcome {
    let tol = 1e-9;
    let mut count = 0;
    for d in 2..=6 {
        for u in valid_labels(d) {
            for r in 0..d as i64 {
                let spec = ProjectionSpec::new(d, u, r).map_err(|e| e.to_string())?;
                ensure!(
                    is_trace_one_projection(&subgroup_projection(&spec), tol),
                    "P_{u:?}({r}) at d={d}"
                );
                let generator = spin(d, u.j, u.k).scale(spec.generator_phase().value());
                for t in 0..d as u64 {
                    let got = expansion_matrix(&spec, &expand_spin_power(&spec, t));
                    ensure!(
                        got.approx_eq(&generator.pow(t as u32), tol),
                        "inversion d={d} {u:?} r={r} t={t}"
                    );
                }
                count += 1;
            }
        }
    }
    for (d, j, k) in [(2, 1, 1), (4, 1, 1), (4, 1, 3), (4, 3, 1), (4, 3, 3)] {
        let spec = ProjectionSpec::new(d, SpinLabel { j, k }, 0).map_err(|e| e.to_string())?;
        ensure!(spec.alpha_applied(), "alpha not applied for d={d} ({j},{k})");
    }
    let dims = DimVector::new(vec![2, 3]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let specs = [2usize, 3]
            .iter()
            .map(|&d| {
                let l = valid_labels(d);
                ProjectionSpec::new(d, l[rng.random_range(0..l.len())], rng.random_range(0..d as i64)).unwrap()
            })
            .collect();
        let spec = ProductProjectionSpec::new(dims.clone(), specs).map_err(|e| e.to_string())?;
        let mut sum = ComplexMatrix::zeros(6);
        for flat in 0..6 {
            let offsets: Vec<i64> = dims.decode(flat).digits().iter().map(|&x| x as i64).collect();
            sum = &sum + &product_projection(&spec.shifted(&offsets));
        }
        ensure!(
            sum.approx_eq(&ComplexMatrix::identity(6), tol),
            "resolution of identity {spec:?}"
        );
    }
    Ok(format!("{count} projections, alpha cases, 20 resolutions on (2,3)"))
}

fn cyclic_family_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let tol = Tolerance::new(1e-9, 1e-8).unwrap();
    let mut count = 0;
    for (d, n) in [(2, 2), (2, 3), (3, 2), (3, 3), (5, 2)] {
        let valid = valid_labels(d);
        for _ in 0..10 {
            let u: Vec<SpinLabel> = (0..n).map(|_| valid[rng.random_range(0..valid.len())]).collect();
            let r: Vec<i64> = (0..n).map(|_| rng.random_range(0..d as i64)).collect();
            let (rho, dec) = cyclic_family_density(d, &u, &r).map_err(|e| e.to_string())?;
            let dims = DimVector::uniform(d, n).unwrap();
            ensure!(
                check_density(rho.matrix().clone(), dims, tol).is_ok(),
                "invalid density d={d} {u:?}"
            );
            let v = verify_decomposition(&dec, rho.matrix(), tol).unwrap();
            ensure!(v.ok, "d={d} u={u:?} r={r:?}: {:?}", v.failure);
            count += 1;
        }
    }
    Ok(format!("{count} families verified"))
}

fn sufficient_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let tol = Tolerance::default();
    let mut worst = 0.0f64;
    for shape in [vec![2, 2], vec![2, 3], vec![3, 3]] {
        let dims = DimVector::new(shape.clone()).unwrap();
        for i in 0..200 {
            let rho = mix_to_l1_norm(&random_density(&dims, &mut rng), 0.999);
            let report = sufficient_certificate(&rho);
            ensure!(
                report.verdict == Verdict::SeparableCertified,
                "{shape:?} #{i}: {}",
                report.verdict
            );
            let v = verify_decomposition(report.decomposition().unwrap(), rho.matrix(), tol).unwrap();
            ensure!(v.ok, "{shape:?} #{i}: {:?}", v.failure);
            worst = worst.max(v.max_reconstruction_error);
        }
    }
    let w = werner_density(WernerSpec::new(2, 2, 1.0 / 3.0).unwrap());
    let report = sufficient_certificate(&w);
    ensure!((report.l1_norm - 1.0).abs() <= 1e-12, "Werner norm {}", report.l1_norm);
    ensure!(
        report.verdict == Verdict::SeparableCertified,
        "Werner boundary: {}",
        report.verdict
    );
    let v = verify_decomposition(report.decomposition().unwrap(), w.matrix(), tol).unwrap();
    ensure!(v.ok, "Werner boundary: {:?}", v.failure);
    Ok(format!(
        "600 densities at norm 0.999, max reconstruction error {worst:.1e}; Werner 2x2 boundary"
    ))
}

fn werner_suite() -> Outcome {
    for (p, n) in [(2usize, 2usize), (2, 3), (3, 2), (3, 3), (5, 2)] {
        let pf = p as f64;
        let s_star = werner_threshold(p, n).map_err(|e| e.to_string())?;
        ensure!(
            s_star == 1.0 / (1.0 + pf.powi(n as i32 - 1)),
            "threshold ({p},{n}) = {s_star}"
        );
        let w = werner_density(WernerSpec::new(p, n, s_star).unwrap());
        let dec = werner_separable_decomposition(p, n).map_err(|e| e.to_string())?;
        let v = verify_decomposition(&dec, w.matrix(), Tolerance::new(1e-9, 1e-10).unwrap()).unwrap();
        ensure!(v.ok, "decomposition ({p},{n}): {:?}", v.failure);
        let above = werner_density(WernerSpec::new(p, n, s_star + 1e-3).unwrap());
        let verdict = necessary_check(&above).map_err(|e| e.to_string())?.verdict;
        ensure!(
            verdict == Verdict::InseparableCertified,
            "necessary ({p},{n}): {verdict}"
        );
        let norm = pf * (1.0 - pf.powi(-(n as i32))) / (1.0 + pf.powi(-(n as i32 - 1)));
        let closed = spin_l1_norm(&werner_spin_coeffs(WernerSpec::new(p, n, s_star).unwrap()).unwrap());
        let direct = spin_l1_norm(&to_spin(&w));
        ensure!(
            (closed - norm).abs() <= 1e-9 && (direct - norm).abs() <= 1e-9,
            "L1 ({p},{n}): {direct} vs {norm}"
        );
    }
    Ok("5 (p,n) pairs: threshold, decomposition, necessary check, L1 norm".into())
}

fn peres_scan() -> Outcome {
    let mut values: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    values.push(1.0 / 3.0);
    let dims = DimVector::new(vec![2, 2]).unwrap();
    for s in values {
        let w = werner_density(WernerSpec::new(2, 2, s).unwrap());
        let min_eig = partial_transpose(w.matrix(), &dims, 1)
            .unwrap()
            .min_hermitian_eigenvalue();
        let ppt = min_eig >= -1e-9;
        ensure!(ppt == (s <= 1.0 / 3.0 + 1e-9), "s = {s}: min eigenvalue {min_eig:.3e}");
        let verdict = peres_check(&w, 1).map_err(|e| e.to_string())?.verdict;
        ensure!(
            (verdict == Verdict::InseparableCertified) == !ppt,
            "s = {s}: peres_check {verdict}"
        );
    }
    Ok("12 values of s".into())
}

fn permutation_suite() -> Outcome {
    let dims = DimVector::new(vec![2, 3, 2]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    let perms = Permutation::all(3);
    ensure!(perms.len() == 6, "expected 6 permutations, got {}", perms.len());
    for sigma in &perms {
        for _ in 0..5 {
            let factors: Vec<ComplexMatrix> = dims.as_slice().iter().map(|&d| random_matrix(d, &mut rng)).collect();
            let on_sigma = tensor_all(&sigma.apply(&factors));
            let back = conjugate_by_permutation(&on_sigma, &dims, sigma).unwrap();
            let err = back.max_abs_diff(&tensor_all(&factors)).unwrap();
            worst = worst.max(err);
            ensure!(err <= 1e-12, "sigma {:?}: {err:.3e}", sigma.images());
        }
    }
    Ok(format!("6 permutations on (2,3,2), max deviation {worst:.1e}"))
}

fn random_amplitudes(d: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..d).map(|_| rng.random_range(0.0..1.0)).collect();
    let norm = raw.iter().map(|b| b * b).sum::<f64>().sqrt();
    raw.iter().map(|b| b / norm).collect()
}

fn closed_phases(d: usize, rng: &mut ChaCha8Rng) -> PhaseVector {
    let mut theta: Vec<f64> = (0..d - 1).map(|_| rng.random_range(-PI..PI)).collect();
    theta.push(-theta.iter().sum::<f64>());
    PhaseVector(theta)
}

fn appendix_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    ensure!(
        m3_map(&PhaseVector::zeros(3))
            .unwrap()
            .approx_eq(&ComplexMatrix::identity(3), 1e-12),
        "M3(0) != I"
    );
    for _ in 0..50 {
        let a = PhaseVector((0..3).map(|_| rng.random_range(-PI..PI)).collect());
        let b = PhaseVector((0..3).map(|_| rng.random_range(-PI..PI)).collect());
        let lhs = &m3_map(&a).unwrap() * &m3_map(&b).unwrap();
        ensure!(
            lhs.approx_eq(&m3_map(&a.add(&b)).unwrap(), 1e-10),
            "M3 group law {a:?} {b:?}"
        );
    }

    for d in [2usize, 3] {
        for i in 0..100 {
            let b = random_amplitudes(d, &mut rng);
            let theta = closed_phases(d, &mut rng);
            let (rho, _) = projection_from_diagonal(d, &b, &theta).map_err(|e| e.to_string())?;
            let p = rho.matrix();
            ensure!(
                is_trace_one_projection(p, 1e-9),
                "d={d} #{i} not a trace-one projection"
            );
            let eig = p.hermitian_eigenvalues();
            ensure!(
                eig[..d - 1].iter().all(|x| x.abs() <= 1e-9),
                "d={d} #{i} rank > 1: {eig:?}"
            );
            for (k, bk) in b.iter().enumerate() {
                ensure!((p[(k, k)].re - bk * bk).abs() <= 1e-12, "d={d} #{i} diagonal {k}");
            }
        }
    }

    let special = [0.0, TAU / 3.0, 2.0 * TAU / 3.0];
    let uniform = [1.0 / 3f64.sqrt(); 3];
    let family: Vec<ComplexMatrix> = (0..3)
        .flat_map(|j| (0..3).map(move |r| (j, r)))
        .map(|(j, r)| subgroup_projection(&ProjectionSpec::new(3, SpinLabel { j, k: 1 }, r).unwrap()))
        .collect();
    for a in special {
        for b in special {
            let closing = (-(a + b)).rem_euclid(TAU);
            let theta = PhaseVector(vec![a, b, closing]);
            let (rho, _) = projection_from_diagonal(3, &uniform, &theta).map_err(|e| e.to_string())?;
            let hit = family.iter().any(|p| p.approx_eq(rho.matrix(), 1e-10));
            ensure!(hit, "special theta {theta:?} is not a subgroup projection");
        }
    }

    let sigma_x = ComplexMatrix::new(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    for _ in 0..20 {
        let t: f64 = rng.random_range(-PI..PI);
        let mut want = ComplexMatrix::identity(2).scale_real(t.cos());
        want.add_scaled(c(0.0, t.sin()), &sigma_x);
        ensure!(m2_map(t).approx_eq(&want, 1e-12), "M2({t})");
    }
    Ok("M3 group law, 200 diagonal projections, 9 special phases, M2 closed form".into())
}

fn golden(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../formats/golden")
        .join(name)
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn cli_end_to_end() -> Outcome {
    let density_text = read(&golden("werner_2x2.density.json"))?;
    let density = DensityFile::parse(&density_text).map_err(|e| e.to_string())?;
    ensure!(
        to_json(&density) == density_text,
        "density golden file does not round-trip"
    );
    let (dims, m) = density.to_matrix().map_err(|e| e.to_string())?;
    let w = werner_density(WernerSpec::new(2, 2, 1.0 / 3.0).unwrap());
    ensure!(m.approx_eq(w.matrix(), 1e-15), "density golden content");

    let coeff_text = read(&golden("werner_2x2.coefficients.json"))?;
    let coeffs = CoefficientsFile::parse(&coeff_text).map_err(|e| e.to_string())?;
    ensure!(
        to_json(&coeffs) == coeff_text,
        "coefficient golden file does not round-trip"
    );
    let table = coeffs.to_coefficients().map_err(|e| e.to_string())?;
    let same = table
        .table()
        .iter()
        .zip(to_spin(&w).table())
        .all(|(a, b)| (a - b).norm() <= 1e-15);
    ensure!(same, "coefficient golden content");

    let dec_text = read(&golden("werner_2x2.decomposition.json"))?;
    let dec = DecompositionFile::parse(&dec_text).map_err(|e| e.to_string())?;
    ensure!(
        to_json(&dec) == dec_text,
        "decomposition golden file does not round-trip"
    );
    let dec = dec.to_decomposition().map_err(|e| e.to_string())?;
    ensure!(dec.dims() == &dims, "decomposition golden dims");
    ensure!(
        verify_decomposition(&dec, &m, Tolerance::default()).unwrap().ok,
        "decomposition golden verify"
    );

    let dir = std::env::temp_dir().join(format!("spinsep-acceptance-{}", std::process::id()));
    fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let out_path = dir.join("werner_3_2.decomposition.json");
    let status = Command::new(env!("CARGO_BIN_EXE_spinsep"))
        .args(["werner", "--p", "3", "--n", "2", "--s", "0.25", "--emit-decomposition"])
        .arg(&out_path)
        .output()
        .map_err(|e| e.to_string())?
        .status;
    ensure!(status.success(), "werner exited with {status}");
    let emitted = DecompositionFile::parse(&read(&out_path)?)
        .and_then(|f| f.to_decomposition())
        .map_err(|e| e.to_string())?;
    let target = werner_density(WernerSpec::new(3, 2, 0.25).unwrap());
    let v = verify_decomposition(&emitted, target.matrix(), Tolerance::default()).unwrap();
    let _ = fs::remove_dir_all(&dir);
    ensure!(v.ok, "emitted decomposition: {:?}", v.failure);
    Ok(format!(
        "3 golden files; werner emit re-verified ({} terms)",
        emitted.terms().len()
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("spin algebra", spin_algebra),
        ("qutrit golden matrices", qutrit_golden),
        ("transform", transform_suite),
        ("projections", projection_suite),
        ("cyclic families", cyclic_family_suite),
        ("sufficient certificate", sufficient_suite),
        ("Werner thresholds", werner_suite),
        ("Peres consistency", peres_scan),
        ("subsystem permutations", permutation_suite),
        ("diagonal parametrization", appendix_suite),
        ("CLI end-to-end", cli_end_to_end),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail})", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({reason})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
