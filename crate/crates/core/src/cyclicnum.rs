//! Numerical recovery of splitting offsets for cyclic covers.
//!
//! For a closed walk `P₁, C₁, P₂, …, Cₙ, P₁` on an incidence graph, each
//! component `Cᵢ` has a local function `hᵢ` with `hᵢ(Pᵢ) = dᵢ^{μᵢ}` and
//! `hᵢ(Pᵢ₊₁) = ζ_{sᵢ}^{αᵢ} dᵢ₊₁^{μᵢ}`, where `μᵢ = m/sᵢ`. The net voltage
//! class of the walk is then `[Σαᵢ] + gcd(sᵢ)·ℤ_m`.
//!
//! Everything here is double precision. Matches against roots of unity are
//! certified by a residual below `tol` and a gap of more than `10·tol` to the
//! second-best root. Smoothness of the curves built by [`build_fp`] is not
//! checked; callers choose generic `g₀`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::Rng;

use crate::artal::ArtalType;
use crate::error::{invalid, Error, Result};
use crate::fingroup::{gcd, CycloCoset};

/// Default tolerance for root-of-unity matching.
pub const DEFAULT_TOL: f64 = 1e-6;
/// Required ratio between the second-best distance gap and `tol`.
pub const MARGIN_FACTOR: f64 = 10.0;

/// `exp(2πi k / n)`
pub fn zeta(n: usize, k: i64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (k.rem_euclid(n as i64) as f64) / n as f64)
}

/// `|z|^{1/μ} · exp(i·arg(z)/μ)` with `arg ∈ (−π, π]`.
pub fn principal_root(z: Complex64, mu: usize) -> Complex64 {
    let mut arg = z.arg();
    if arg <= -PI {
        arg = PI;
    }
    Complex64::from_polar(z.norm().powf(1.0 / mu as f64), arg / mu as f64)
}

/// Sparse polynomial with complex coefficients keyed by exponent vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct CPolynomial {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Complex64>,
}

impl CPolynomial {
    pub fn zero(vars: &[&str]) -> Self {
        Self { vars: vars.iter().map(|v| v.to_string()).collect(), terms: BTreeMap::new() }
    }

    /// The zero polynomial in `x, y, z`.
    pub fn xyz() -> Self {
        Self::zero(&["x", "y", "z"])
    }

    pub fn from_terms(vars: Vec<String>, terms: impl IntoIterator<Item = (Vec<u32>, Complex64)>) -> Result<Self> {
        let mut p = Self { vars, terms: BTreeMap::new() };
        for (exp, c) in terms {
            if exp.len() != p.vars.len() {
                return invalid(format!("exponent vector {exp:?} does not match {} variables", p.vars.len()));
            }
            *p.terms.entry(exp).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        p.normalize();
        Ok(p)
    }

    pub fn constant(vars: &[&str], c: Complex64) -> Self {
        let mut p = Self::zero(vars);
        p.terms.insert(vec![0; vars.len()], c);
        p.normalize();
        p
    }

    /// The `i`-th variable as a polynomial.
    pub fn var(vars: &[&str], i: usize) -> Self {
        let mut p = Self::zero(vars);
        let mut exp = vec![0; vars.len()];
        exp[i] = 1;
        p.terms.insert(exp, Complex64::new(1.0, 0.0));
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Complex64> {
        &self.terms
    }

    pub fn coefficient(&self, exp: &[u32]) -> Complex64 {
        self.terms.get(exp).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree of the homogeneous polynomial, `None` when the terms have
    /// different degrees or the polynomial is zero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    fn normalize(&mut self) {
        self.terms.retain(|_, c| *c != Complex64::new(0.0, 0.0));
    }

    fn same_vars(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "polynomials over different variables");
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut p = self.clone();
        for v in p.terms.values_mut() {
            *v *= c;
        }
        p.normalize();
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(&self.vars.iter().map(String::as_str).collect::<Vec<_>>(), Complex64::new(1.0, 0.0));
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Term-by-term evaluation in ascending exponent order.
    pub fn eval(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.vars.len() {
            return invalid(format!("point has {} coordinates, polynomial has {} variables", point.len(), self.vars.len()));
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for (exp, c) in &self.terms {
            let mut t = *c;
            for (z, &k) in point.iter().zip(exp) {
                t *= z.powu(k);
            }
            sum += t;
        }
        Ok(sum)
    }
}

impl Add for &CPolynomial {
    type Output = CPolynomial;

    fn add(self, other: &CPolynomial) -> CPolynomial {
        self.same_vars(other);
        let mut p = self.clone();
        for (exp, c) in &other.terms {
            *p.terms.entry(exp.clone()).or_default() += c;
        }
        p.normalize();
        p
    }
}

impl Neg for &CPolynomial {
    type Output = CPolynomial;

    fn neg(self) -> CPolynomial {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Sub for &CPolynomial {
    type Output = CPolynomial;

    fn sub(self, other: &CPolynomial) -> CPolynomial {
        self + &(-other)
    }
}

impl Mul for &CPolynomial {
    type Output = CPolynomial;

    fn mul(self, other: &CPolynomial) -> CPolynomial {
        self.same_vars(other);
        let mut p = CPolynomial { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let exp: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *p.terms.entry(exp).or_default() += c1 * c2;
            }
        }
        p.normalize();
        p
    }
}

/// A point of ℙ² scaled so that its largest coordinate (the first one, on
/// ties) equals 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectivePoint {
    coords: [Complex64; 3],
}

impl ProjectivePoint {
    pub fn new(coords: [Complex64; 3]) -> Result<Self> {
        let (mut best, mut norm) = (0, 0.0);
        for (i, c) in coords.iter().enumerate() {
            if c.norm() > norm {
                best = i;
                norm = c.norm();
            }
        }
        if norm == 0.0 {
            return invalid("projective point with all coordinates zero");
        }
        let scale = coords[best];
        Ok(Self { coords: coords.map(|c| c / scale) })
    }

    pub fn real(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::new([Complex64::new(x, 0.0), Complex64::new(y, 0.0), Complex64::new(z, 0.0)])
    }

    pub fn coords(&self) -> [Complex64; 3] {
        self.coords
    }
}

/// The three vertices of the coordinate triangle, in the order
/// `(0:1:0), (0:0:1), (1:0:0)`.
pub fn coordinate_points() -> [ProjectivePoint; 3] {
    [
        ProjectivePoint::real(0.0, 1.0, 0.0).expect("nonzero"),
        ProjectivePoint::real(0.0, 0.0, 1.0).expect("nonzero"),
        ProjectivePoint::real(1.0, 0.0, 0.0).expect("nonzero"),
    ]
}

/// Coefficients `c_{i,j}` of the normal form, one list per tangent line.
pub type ArtalCoefficients = [Vec<Complex64>; 3];

/// Checks the coefficient conditions: the correct number of values per line,
/// pairwise distinct values per line, and
/// `∏ c_{1,j}^{μ_{1,j}} = ∏ c_{2,j}^{μ_{2,j}} = 1`,
/// `∏ c_{3,j}^{μ_{3,j}} = ζ_d^{β·μ₃}`.
pub fn check_coefficients(ty: &ArtalType, beta: usize, c: &ArtalCoefficients, tol: f64) -> Result<()> {
    if beta >= ty.s() {
        return invalid(format!("β = {beta} must lie in [0, {})", ty.s()));
    }
    for i in 0..3 {
        let p = ty.partition(i);
        if c[i].len() != p.parts().len() {
            return invalid(format!("line {} needs {} coefficients, got {}", i + 1, p.parts().len(), c[i].len()));
        }
        for j in 0..c[i].len() {
            for k in j + 1..c[i].len() {
                if (c[i][j] - c[i][k]).norm() <= tol {
                    return invalid(format!("coefficients c[{}][{j}] and c[{}][{k}] coincide", i + 1, i + 1));
                }
            }
        }
        let product = weighted_product(ty, i, &c[i]);
        let target = if i == 2 { zeta(ty.d(), (beta * ty.mu(2)) as i64) } else { Complex64::new(1.0, 0.0) };
        if (product - target).norm() > tol {
            return invalid(format!(
                "product of c[{}] with weights μ is {:.12} but must be {:.12}",
                i + 1,
                product,
                target
            ));
        }
    }
    Ok(())
}

fn weighted_product(ty: &ArtalType, i: usize, c: &[Complex64]) -> Complex64 {
    c.iter().zip(ty.mu_parts(i)).map(|(z, mu)| z.powu(mu)).product()
}

/// `∏(y + c_{1,j} z)^{e_{1,j}} + ∏(z + c_{2,j} x)^{e_{2,j}} + ∏(x + c_{3,j} y)^{e_{3,j}}
/// − x^d − y^d − z^d + xyz·g₀`
pub fn build_fp(ty: &ArtalType, beta: usize, c: &ArtalCoefficients, g0: &CPolynomial, tol: f64) -> Result<CPolynomial> {
    check_coefficients(ty, beta, c, tol)?;
    let names = ["x", "y", "z"];
    if g0.vars() != names {
        return invalid("g0 must be a polynomial in x, y, z");
    }
    let d = ty.d() as u32;
    if !g0.is_zero() && g0.homogeneous_degree() != Some(d - 3) {
        return invalid(format!("g0 must be homogeneous of degree {}", d - 3));
    }
    let v: Vec<CPolynomial> = (0..3).map(|i| CPolynomial::var(&names, i)).collect();
    let mut f = CPolynomial::xyz();
    // line i pairs the variables (a, b) in the factor (a + c·b)
    for (i, (a, b)) in [(1, 2), (2, 0), (0, 1)].into_iter().enumerate() {
        let mut prod = CPolynomial::constant(&names, Complex64::new(1.0, 0.0));
        for (cij, &e) in c[i].iter().zip(ty.partition(i).parts()) {
            let factor = &v[a] + &v[b].scale(*cij);
            prod = &prod * &factor.pow(e);
        }
        f = &f + &prod;
    }
    for vi in &v {
        f = &f - &vi.pow(d);
    }
    let xyz = &(&v[0] * &v[1]) * &v[2];
    Ok(&f + &(&xyz * g0))
}

/// `h_x(P₁), h_x(P₂), h_y(P₂), h_y(P₃), h_z(P₃), h_z(P₁)` where
/// `h_x = ∏(y + c_{1,j} z)^{μ_{1,j}} / (x+y+z)^{μ₁}` and cyclically.
pub fn h_values_for_artal(ty: &ArtalType, beta: usize, c: &ArtalCoefficients, tol: f64) -> Result<[Complex64; 6]> {
    check_coefficients(ty, beta, c, tol)?;
    let pts = coordinate_points();
    let mut out = [Complex64::new(0.0, 0.0); 6];
    // (line, pair of variables, the two points on the line)
    let lines = [(0, (1, 2), [0, 1]), (1, (2, 0), [1, 2]), (2, (0, 1), [2, 0])];
    for (slot, (i, (a, b), on_line)) in lines.into_iter().enumerate() {
        for (k, &p) in on_line.iter().enumerate() {
            let q = pts[p].coords();
            let denom = (q[0] + q[1] + q[2]).powu(ty.mu(i) as u32);
            if denom.norm() <= tol {
                return invalid("evaluation point lies on the auxiliary line x+y+z=0");
            }
            let num: Complex64 = c[i].iter().zip(ty.mu_parts(i)).map(|(cij, mu)| (q[a] + cij * q[b]).powu(mu)).product();
            out[2 * slot + k] = num / denom;
        }
    }
    Ok(out)
}

/// One step of a walk: `h = hᵢ(Pᵢ₊₁)`, `d_next = dᵢ₊₁`, `mu = μᵢ`, `s = sᵢ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HEval {
    pub h: Complex64,
    pub d_next: Complex64,
    pub mu: usize,
    pub s: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OffsetExtraction {
    pub alpha: usize,
    /// Distance from `h / d_next^μ` to `ζ_s^α`.
    pub residual: f64,
    /// Second-best distance minus the best; infinite when `s = 1`.
    pub margin: f64,
}

/// Recovers each `αᵢ` as the `k ∈ [0, sᵢ)` minimising
/// `|hᵢ(Pᵢ₊₁)/dᵢ₊₁^{μᵢ} − ζ_{sᵢ}^k|`.
pub fn extract_offsets(evals: &[HEval], m: usize, tol: f64) -> Result<Vec<OffsetExtraction>> {
    evals
        .iter()
        .enumerate()
        .map(|(i, ev)| {
            if ev.s == 0 || ev.mu * ev.s != m {
                return invalid(format!("step {}: μ·s = {}·{} differs from m = {m}", i + 1, ev.mu, ev.s));
            }
            let denom = ev.d_next.powu(ev.mu as u32);
            if denom.norm() == 0.0 {
                return Err(Error::Extraction(format!("step {}: d_next^μ vanishes", i + 1)));
            }
            let ratio = ev.h / denom;
            let mut dists: Vec<(f64, usize)> = (0..ev.s).map(|k| ((ratio - zeta(ev.s, k as i64)).norm(), k)).collect();
            dists.sort_by(|a, b| a.0.total_cmp(&b.0));
            let (residual, alpha) = dists[0];
            let margin = dists.get(1).map_or(f64::INFINITY, |d| d.0 - residual);
            if residual >= tol {
                return Err(Error::Extraction(format!(
                    "step {}: ratio {ratio:.12} is {residual:.3e} from the nearest {}-th root of unity (tol {tol:e})",
                    i + 1,
                    ev.s
                )));
            }
            if margin <= MARGIN_FACTOR * tol {
                return Err(Error::Extraction(format!(
                    "step {}: ambiguous match, margin {margin:.3e} ≤ {MARGIN_FACTOR}·tol",
                    i + 1
                )));
            }
            Ok(OffsetExtraction { alpha, residual, margin })
        })
        .collect()
}

/// `[Σαᵢ mod m] + gcd(s₁, …, sₙ)·ℤ_m`
pub fn theorem_net_voltage(s_list: &[usize], alpha_list: &[usize], m: usize) -> Result<CycloCoset> {
    if s_list.len() != alpha_list.len() {
        return invalid("splitting numbers and offsets differ in length");
    }
    if s_list.is_empty() {
        return invalid("walk must visit at least one component");
    }
    if let Some(&bad) = s_list.iter().find(|&&s| s == 0 || !m.is_multiple_of(s)) {
        return invalid(format!("splitting number {bad} does not divide {m}"));
    }
    let s = s_list.iter().fold(0, |g, &x| gcd(g, x));
    let alpha: usize = alpha_list.iter().sum();
    CycloCoset::new(m, (alpha % m) as i64, s)
}

/// The three walk steps for the coordinate triangle, with `dᵢ` taken on the
/// root branch `branches[i]` (0 is the principal root).
pub fn artal_h_evals(ty: &ArtalType, h: &[Complex64; 6], branches: [usize; 3]) -> Vec<HEval> {
    // dᵢ from hᵢ(Pᵢ): h_x(P₁), h_y(P₂), h_z(P₃)
    let d: Vec<Complex64> = (0..3)
        .map(|i| {
            let mu = ty.mu(i);
            principal_root(h[2 * i], mu) * zeta(mu, branches[i] as i64)
        })
        .collect();
    (0..3)
        .map(|i| HEval { h: h[2 * i + 1], d_next: d[(i + 1) % 3], mu: ty.mu(i), s: ty.s_i(i) })
        .collect()
}

/// β recovered from coefficients, with the per-line extractions and the
/// predicted class of the triangle walk.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaRecovery {
    pub h_values: [Complex64; 6],
    pub offsets: Vec<OffsetExtraction>,
    pub net_voltage: CycloCoset,
    pub beta: usize,
}

pub fn recover_beta(ty: &ArtalType, beta: usize, c: &ArtalCoefficients, tol: f64, branches: [usize; 3]) -> Result<BetaRecovery> {
    let h = h_values_for_artal(ty, beta, c, tol.min(1e-8))?;
    let offsets = extract_offsets(&artal_h_evals(ty, &h, branches), ty.d(), tol)?;
    let s_list: Vec<usize> = (0..3).map(|i| ty.s_i(i)).collect();
    let alphas: Vec<usize> = offsets.iter().map(|o| o.alpha).collect();
    let nv = theorem_net_voltage(&s_list, &alphas, ty.d())?;
    Ok(BetaRecovery { h_values: h, offsets, beta: nv.offset(), net_voltage: nv })
}

/// Random coefficients satisfying the product conditions for `β`, with
/// pairwise distinct values on each line, and a random `g₀`.
pub fn sample_coefficients<R: Rng>(ty: &ArtalType, beta: usize, rng: &mut R) -> Result<(ArtalCoefficients, CPolynomial)> {
    if beta >= ty.s() {
        return invalid(format!("β = {beta} must lie in [0, {})", ty.s()));
    }
    let mut lines: Vec<Vec<Complex64>> = Vec::with_capacity(3);
    for i in 0..3 {
        let mu = ty.mu_parts(i);
        let target = if i == 2 { zeta(ty.d(), (beta * ty.mu(2)) as i64) } else { Complex64::new(1.0, 0.0) };
        let line = loop {
            let n = mu.len();
            let mut c: Vec<Complex64> = (0..n - 1)
                .map(|_| Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(-PI..PI)))
                .collect();
            let partial: Complex64 = c.iter().zip(&mu).map(|(z, &k)| z.powu(k)).product();
            let last_mu = mu[n - 1] as usize;
            let branch = rng.gen_range(0..last_mu) as i64;
            c.push(principal_root(target / partial, last_mu) * zeta(last_mu, branch));
            let distinct = (0..n).all(|j| (j + 1..n).all(|k| (c[j] - c[k]).norm() > 1e-3));
            if distinct {
                break c;
            }
        };
        lines.push(line);
    }
    let g0 = random_homogeneous(ty.d() as u32 - 3, rng);
    let coeffs: ArtalCoefficients = [lines[0].clone(), lines[1].clone(), lines[2].clone()];
    Ok((coeffs, g0))
}

fn random_homogeneous<R: Rng>(degree: u32, rng: &mut R) -> CPolynomial {
    let mut terms = Vec::new();
    for a in 0..=degree {
        for b in 0..=degree - a {
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            terms.push((vec![a, b, degree - a - b], c));
        }
    }
    CPolynomial::from_terms(vec!["x".into(), "y".into(), "z".into()], terms).expect("three exponents")
}
