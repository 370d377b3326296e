//! Randomized property tests: numeric oracles for the derivative and Euler
//! operators, quadrature for the scaling homotopy, and the exact identities
//! behind divergence extraction and potential reconstruction.

use std::collections::BTreeMap;
use std::sync::Arc;

use jetcalc::{jet_potential, rat, rint, DiffPoly, FieldRole, FieldSet, JetVar, Monomial, MultiIndex, Rat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn jv(field: usize, orders: &[u8]) -> JetVar {
    JetVar::new(field, MultiIndex::new(orders.to_vec()))
}

/// Random differential polynomial with small integer coefficients.
fn random_poly(
    rng: &mut ChaCha8Rng,
    fs: &Arc<FieldSet>,
    max_degree: usize,
    max_order: usize,
    n_terms: usize,
) -> DiffPoly {
    let mut p = DiffPoly::zero(fs);
    for _ in 0..n_terms {
        let deg = rng.gen_range(1..=max_degree);
        let mut factors = Vec::new();
        for _ in 0..deg {
            let field = rng.gen_range(0..fs.len());
            let mut orders = vec![0u8; fs.dim()];
            let total: usize = rng.gen_range(0..=max_order);
            for _ in 0..total {
                orders[rng.gen_range(0..fs.dim())] += 1;
            }
            factors.push((jv(field, &orders), 1));
        }
        let c = rint(rng.gen_range(-4..=4i64));
        p = &p + &DiffPoly::monomial(fs, Monomial::from_factors(factors), c);
    }
    p
}

/// Jets of the polynomial path u(x) = sum_k c_k x^k at a point, exactly.
fn poly_path_jets(coeffs: &[f64], x: f64, orders: usize) -> Vec<f64> {
    let mut out = Vec::new();
    for k in 0..=orders {
        // k-th derivative of sum c_j x^j
        let mut v = 0.0;
        for (j, &c) in coeffs.iter().enumerate() {
            if j >= k {
                let mut fac = 1.0;
                for i in 0..k {
                    fac *= (j - i) as f64;
                }
                v += c * fac * x.powi((j - k) as i32);
            }
        }
        out.push(v);
    }
    out
}

#[test]
fn total_derivative_matches_finite_differences() {
    // Along a concrete path u(x), D_x p evaluated at the jets of u equals the
    // x-derivative of x -> p(jets of u at x), to finite-difference accuracy.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let fs = FieldSet::new(1, &[("u", FieldRole::Generic)]);
    for _ in 0..20 {
        let p = random_poly(&mut rng, &fs, 3, 2, 4);
        let dp = p.total_derivative(0).unwrap();
        let coeffs: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x0 = rng.gen_range(-0.5..0.5);
        let eval = |x: f64, q: &DiffPoly| {
            let jets = poly_path_jets(&coeffs, x, 8);
            q.eval_f64(&|v: &JetVar| jets[v.order()])
        };
        let h = 1e-5;
        let fd = (eval(x0 + h, &p) - eval(x0 - h, &p)) / (2.0 * h);
        let exact = eval(x0, &dp);
        assert!(
            (fd - exact).abs() < 1e-6 * (1.0 + exact.abs()),
            "finite difference {fd} vs exact {exact}"
        );
    }
}

#[test]
fn euler_matches_functional_gradient() {
    // E_S(S*S_{X1}^2) against the finite-difference gradient of the
    // functional F[S] = integral of the density over a period, with S a
    // trigonometric polynomial sampled on a grid.
    let fs = FieldSet::new(1, &[("S", FieldRole::Phase)]);
    let s = DiffPoly::var(&fs, jv(0, &[0]));
    let sx = DiffPoly::var(&fs, jv(0, &[1]));
    let density = &s * &(&sx * &sx);
    let euler = density.euler_operator(0).unwrap();

    let n = 64usize;
    let xs: Vec<f64> = (0..n).map(|i| 2.0 * std::f64::consts::PI * i as f64 / n as f64).collect();
    // S(x) = 0.7 + 0.3 sin x + 0.2 cos 2x, all jets exact.
    let sval = |x: f64, k: usize| -> f64 {
        let a = 0.3;
        let b = 0.2;
        match k % 4 {
            0 if k == 0 => 0.7 + a * x.sin() + b * (2.0 * x).cos(),
            _ => {
                // k-th derivative
                let da = a * (x + k as f64 * std::f64::consts::FRAC_PI_2).sin();
                let db = b * 2f64.powi(k as i32) * (2.0 * x + k as f64 * std::f64::consts::FRAC_PI_2).cos();
                da + db
            }
        }
    };
    let f_of = |svals: &dyn Fn(f64, usize) -> f64| -> f64 {
        xs.iter()
            .map(|&x| density.eval_f64(&|v: &JetVar| svals(x, v.order())))
            .sum::<f64>()
            / n as f64
    };
    let base = f_of(&sval);
    let _ = base;
    // Perturb by a bump mode cos(3x): dF = <E(density), cos(3x)> / period.
    let eps = 1e-6;
    let pert = |sign: f64| {
        f_of(&|x: f64, k: usize| {
            sval(x, k) + sign * eps * (3.0 * x + k as f64 * std::f64::consts::FRAC_PI_2).cos() * 3f64.powi(k as i32)
        })
    };
    let fd = (pert(1.0) - pert(-1.0)) / (2.0 * eps);
    let pairing = xs
        .iter()
        .map(|&x| euler.eval_f64(&|v: &JetVar| sval(x, v.order())) * (3.0 * x).cos())
        .sum::<f64>()
        / n as f64;
    assert!(
        (fd - pairing).abs() < 1e-6 * (1.0 + pairing.abs()),
        "functional gradient {fd} vs Euler pairing {pairing}"
    );
}

#[test]
fn scale_homotopy_matches_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let fs = FieldSet::new(2, &[("S", FieldRole::Phase), ("u", FieldRole::Generic)]);
    for _ in 0..10 {
        let p = random_poly(&mut rng, &fs, 3, 2, 5);
        let k = rng.gen_range(0..3usize);
        let jets: Vec<(JetVar, f64)> = p
            .jet_vars()
            .into_iter()
            .map(|v| (v, rng.gen_range(-1.0..1.0)))
            .collect();
        let lookup = |v: &JetVar, lam: f64| {
            jets.iter()
                .find(|(w, _)| w == v)
                .map(|(_, x)| lam * x)
                .unwrap_or(0.0)
        };
        // Gauss-Legendre on [0,1] with enough nodes for the exact degree.
        let deg = p.degree() + k;
        let n_nodes = deg / 2 + 2;
        let (nodes, weights) = gauss_legendre_01(n_nodes);
        let quad: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(&lam, &w)| w * lam.powi(k as i32) * p.eval_f64(&|v: &JetVar| lookup(v, lam)))
            .sum();
        let exact = p.scale_homotopy(k).eval_f64(&|v: &JetVar| lookup(v, 1.0));
        assert!(
            (quad - exact).abs() < 1e-10 * (1.0 + exact.abs()),
            "quadrature {quad} vs homotopy {exact}"
        );
    }
}

/// Gauss-Legendre nodes/weights transplanted to [0,1] via Newton iteration.
fn gauss_legendre_01(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..60 {
            let (mut p0, mut p1) = (1.0f64, 0.0f64);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * x * p1 - j as f64 * p2) / (j as f64 + 1.0);
            }
            let dp = n as f64 * (x * p0 - p1) / (x * x - 1.0);
            let dx = p0 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (mut p0, mut p1) = (1.0f64, 0.0f64);
        for j in 0..n {
            let p2 = p1;
            p1 = p0;
            p0 = ((2 * j + 1) as f64 * x * p1 - j as f64 * p2) / (j as f64 + 1.0);
        }
        let dp = n as f64 * (x * p0 - p1) / (x * x - 1.0);
        nodes.push(0.5 * (1.0 - x));
        weights.push(1.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

#[test]
fn euler_divergence_duality() {
    // For every flux vector v, E_f(sum_p D_p v^p) = 0 exactly, all fields.
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for dim in 1..=2usize {
        let fs = FieldSet::new(dim, &[("S", FieldRole::Phase), ("u", FieldRole::Generic)]);
        for _ in 0..10 {
            let v: Vec<DiffPoly> = (0..dim)
                .map(|_| random_poly(&mut rng, &fs, 3, 2, 4))
                .collect();
            let div = DiffPoly::divergence(&v).unwrap();
            for f in 0..fs.len() {
                assert!(div.euler_operator(f).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn divergence_extraction_round_trip() {
    // sum_p D_p(extract(p))^p == p exactly on divergences.
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for dim in 1..=3usize {
        let fs = FieldSet::new(dim, &[("S", FieldRole::Phase), ("u", FieldRole::Generic)]);
        for _ in 0..15 {
            let v: Vec<DiffPoly> = (0..dim)
                .map(|_| random_poly(&mut rng, &fs, 3, 2, 3))
                .collect();
            let p = DiffPoly::divergence(&v).unwrap();
            let w = p.divergence_extract().unwrap();
            assert_eq!(DiffPoly::divergence(&w).unwrap(), p);
        }
    }
}

#[test]
fn homotopy_reconstruction_identity() {
    // f - f(0) is reconstructed from the radial scaling of its Euler-type
    // contraction: f = sum over monomials of degree n of n * (f-monomial)/n.
    // Checked through scale_homotopy with k derived per monomial: equivalent
    // statement - scale_homotopy(f, 0) recovers f after multiplying each
    // monomial back by its degree + 1... exercised as exact evaluation:
    // Int_0^1 d/dlam f(lam jets) dlam = f(jets) - f(0).
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let fs = FieldSet::new(1, &[("u", FieldRole::Generic)]);
    for _ in 0..10 {
        let p = random_poly(&mut rng, &fs, 4, 2, 5);
        // d/dlam f(lam u) = sum_v u_v df/du_v (lam u); integrate exactly:
        // each monomial c*M of degree n integrates to c*M (n * 1/n).
        let mut contraction = DiffPoly::zero(&fs);
        for v in p.jet_vars() {
            let dv = p.partial(&v);
            let lifted = &dv * &DiffPoly::var(&fs, v.clone());
            contraction = &contraction + &lifted;
        }
        // Radial integral of the contraction: monomial degree n gets 1/n.
        // scale_homotopy(q, k) divides by n+k+1, so shift by multiplying each
        // monomial by (n+1)/n is awkward; instead compare against p - p(0)
        // via exact rational evaluation at random points.
        let jets: BTreeMap<JetVar, Rat> = p
            .jet_vars()
            .into_iter()
            .map(|v| (v, rat(rng.gen_range(-3..=3i64), rng.gen_range(1..=3i64))))
            .collect();
        // Exact integral: for monomial cM of degree n in the contraction,
        // its lambda integral is c/n M; reconstruct with that weight.
        let mut recon = Rat::from_integer(0.into());
        for (m, c) in contraction.terms() {
            let n = m.degree();
            let mval = DiffPoly::monomial(&fs, m.clone(), c.clone())
                .eval_at_jet(&jets)
                .unwrap();
            recon += mval / Rat::from_integer((n as i64).into());
        }
        let direct = p.eval_at_jet(&jets).unwrap() - p.constant_term();
        assert_eq!(recon, direct);
    }
}

#[test]
fn eval_is_ring_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let fs = FieldSet::new(1, &[("u", FieldRole::Generic)]);
    for _ in 0..10 {
        let p = random_poly(&mut rng, &fs, 3, 2, 4);
        let q = random_poly(&mut rng, &fs, 3, 2, 4);
        let mut jets: BTreeMap<JetVar, Rat> = BTreeMap::new();
        for v in p.jet_vars().into_iter().chain(q.jet_vars()) {
            jets.entry(v)
                .or_insert_with(|| rat(rng.gen_range(-2..=2i64), rng.gen_range(1..=3i64)));
        }
        let pv = p.eval_at_jet(&jets).unwrap();
        let qv = q.eval_at_jet(&jets).unwrap();
        assert_eq!((&p * &q).eval_at_jet(&jets).unwrap(), pv.clone() * qv.clone());
        assert_eq!((&p + &q).eval_at_jet(&jets).unwrap(), pv + qv);
    }
}

#[test]
fn jet_potential_round_trip() {
    // Gradients of random potentials integrate back to the same potential
    // (normalized at zero).
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let fs = FieldSet::new(2, &[("S", FieldRole::Phase)]);
    for _ in 0..10 {
        let g0 = random_poly(&mut rng, &fs, 3, 1, 4);
        let vars = g0.jet_vars();
        if vars.is_empty() {
            continue;
        }
        let partials: BTreeMap<JetVar, DiffPoly> =
            vars.iter().map(|v| (v.clone(), g0.partial(v))).collect();
        let g = jet_potential(&fs, &partials).unwrap();
        // g and g0 agree up to terms in variables outside `vars` (none here)
        // and the constant term.
        let diff = &g - &g0;
        assert!(diff.degree() == 0, "difference must be constant, got {diff}");
    }
}
