//! Hyperbolic tetrahedra given by dihedral angles: Gram matrix, the potential
//! F and its stationary point, the dilogarithm volume, and the leading-order
//! predictor for |6j|.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qdilog::li2_circle;
use crate::sixj::{permute_edges, s4};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const TWO_PI: f64 = 2.0 * PI;
const IDEAL_TOL: f64 = 1e-9;
/// |det G| below this is treated as the Euclidean boundary.
pub const EUCLIDEAN_TOL: f64 = 1e-12;

fn cis(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, TWO_PI * x)
}

/// Edge positions a..f as pairs of the four faces of the Gram matrix.
pub const FACE_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (1, 3), (2, 3), (1, 2), (0, 3)];

/// Vertex triples (a,b,e), (a,c,f), (b,d,f), (c,d,e) as indices into a..f.
pub const VERTICES: [[usize; 3]; 4] = [[0, 1, 4], [0, 2, 5], [1, 3, 5], [2, 3, 4]];

/// Pairs of opposite edges {a,d}, {b,c}, {e,f}; τ_k sums the other four.
pub const QUADS: [[usize; 4]; 3] = [[0, 1, 2, 3], [0, 3, 4, 5], [1, 2, 4, 5]];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexClass {
    Normal,
    Ideal,
    UltraIdeal,
}

/// Dihedral angles θ_a..θ_f in radians.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AngleSet {
    pub theta: [f64; 6],
}

impl AngleSet {
    pub fn new(theta: [f64; 6]) -> Result<Self> {
        if theta.iter().any(|t| t.is_nan() || t.abs() >= PI) {
            return Err(Error::Domain("dihedral angles must lie in (-π, π)".into()));
        }
        Ok(AngleSet { theta })
    }

    pub fn regular(theta: f64) -> Result<Self> {
        Self::new([theta; 6])
    }

    /// η_x = (π − θ_x)/(2π).
    pub fn eta(&self) -> [f64; 6] {
        self.theta.map(|t| (PI - t) / TWO_PI)
    }

    pub fn sigma(&self) -> [f64; 4] {
        let e = self.eta();
        VERTICES.map(|v| v.iter().map(|&i| e[i]).sum())
    }

    pub fn tau(&self) -> [f64; 3] {
        let e = self.eta();
        QUADS.map(|q| q.iter().map(|&i| e[i]).sum())
    }

    /// (max σ_j, min τ_k).
    pub fn window(&self) -> (f64, f64) {
        (
            self.sigma().iter().cloned().fold(f64::MIN, f64::max),
            self.tau().iter().cloned().fold(f64::MAX, f64::min),
        )
    }

    pub fn gram(&self) -> [[f64; 4]; 4] {
        let mut g = [[1.0; 4]; 4];
        for (x, &(i, j)) in FACE_PAIRS.iter().enumerate() {
            g[i][j] = -self.theta[x].cos();
            g[j][i] = g[i][j];
        }
        g
    }

    /// Relabel under a permutation of the four faces.
    pub fn relabel(&self, perm: [usize; 4]) -> AngleSet {
        AngleSet {
            theta: permute_edges(self.theta, &FACE_PAIRS, perm),
        }
    }

    /// All 24 relabelings.
    pub fn symmetries(&self) -> Vec<AngleSet> {
        s4().into_iter().map(|p| self.relabel(p)).collect()
    }
}

#[allow(clippy::needless_range_loop)]
fn det4(m: [[f64; 4]; 4]) -> f64 {
    let mut a = m;
    let mut det = 1.0;
    for col in 0..4 {
        let piv = (col..4)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..4 {
            let f = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= f * a[col][k];
            }
        }
    }
    det
}

pub fn gram_det(angles: &AngleSet) -> f64 {
    det4(angles.gram())
}

pub fn classify_vertex(angles: &AngleSet, vertex: usize) -> VertexClass {
    let s: f64 = VERTICES[vertex].iter().map(|&i| angles.theta[i]).sum();
    if (s - PI).abs() <= IDEAL_TOL {
        VertexClass::Ideal
    } else if s > PI {
        VertexClass::Normal
    } else {
        VertexClass::UltraIdeal
    }
}

/// F, F′ and F″ at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FValue {
    pub f: Complex64,
    pub fp: Complex64,
    pub fpp: Complex64,
}

fn near_integer(x: f64) -> bool {
    (x - x.round()).abs() < 1e-13
}

/// F(ζ) = (1/4πi)(−2π²ζ − Li₂(e^{2πiζ}) + Σ Li₂(e^{2πi(ζ−σ_j)}) + Σ Li₂(e^{2πi(τ_k−ζ)})
///                 − 6π²ζ² + 8π²(Ση)ζ).
pub fn potential_f(angles: &AngleSet, zeta: f64) -> Result<FValue> {
    let (sig, tau) = (angles.sigma(), angles.tau());
    if near_integer(zeta)
        || sig.iter().any(|s| near_integer(zeta - s))
        || tau.iter().any(|t| near_integer(t - zeta))
    {
        return Err(Error::Domain(format!("ζ = {zeta} is a branch point of F")));
    }
    let eta_sum: f64 = angles.eta().iter().sum();
    let pi2 = PI * PI;
    let two_pi_i = I * TWO_PI;
    let log1m = |x: f64| (1.0 - cis(x)).ln();

    let mut f = Complex64::new(
        -2.0 * pi2 * zeta - 6.0 * pi2 * zeta * zeta + 8.0 * pi2 * eta_sum * zeta,
        0.0,
    ) - li2_circle(zeta);
    let mut fp = Complex64::new(-2.0 * pi2 - 12.0 * pi2 * zeta + 8.0 * pi2 * eta_sum, 0.0)
        + two_pi_i * log1m(zeta);
    let u = cis(zeta);
    let mut g = -u / (1.0 - u);
    for s in sig {
        f += li2_circle(zeta - s);
        fp -= two_pi_i * log1m(zeta - s);
        g += u / (cis(s) - u);
    }
    for t in tau {
        f += li2_circle(t - zeta);
        fp += two_pi_i * log1m(t - zeta);
        g -= u / (cis(t) - u);
    }
    let k = 1.0 / (4.0 * PI * I);
    Ok(FValue {
        f: f * k,
        fp: fp * k,
        fpp: I * PI * g,
    })
}

/// Stationary point of F and the quadratic it solves.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StationaryData {
    pub zeta0: f64,
    pub u0: Complex64,
    /// Coefficients a₂, a₁, a₀ of the quadratic, scaled by e^{−πiΣσ} so that
    /// the discriminant is real.
    pub a2: Complex64,
    pub a1: Complex64,
    pub a0: Complex64,
    pub fpp: Complex64,
    /// p(0), zero up to rounding.
    pub p0: Complex64,
}

impl StationaryData {
    pub fn discriminant(&self) -> Complex64 {
        self.a1 * self.a1 - 4.0 * self.a0 * self.a2
    }

    /// e^{−πiΣσ} Π(A_j − u₀)/u₀² · F″(ζ₀), which is ±4π√(−det G).
    pub fn product_identity(&self, angles: &AngleSet) -> Complex64 {
        let sig = angles.sigma();
        let mut p = Complex64::from_polar(1.0, -PI * sig.iter().sum::<f64>());
        for s in sig {
            p *= cis(s) - self.u0;
        }
        p / (self.u0 * self.u0) * self.fpp
    }
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficients (ascending) of p(u) = Π(A_j − u) − (1 − u)Π(B_k − u).
pub fn quartic(angles: &AngleSet) -> [Complex64; 5] {
    let one = Complex64::new(1.0, 0.0);
    let mut lhs = vec![one];
    for s in angles.sigma() {
        lhs = poly_mul(&lhs, &[cis(s), -one]);
    }
    let mut rhs = vec![one, -one];
    for t in angles.tau() {
        rhs = poly_mul(&rhs, &[cis(t), -one]);
    }
    let mut out = [Complex64::new(0.0, 0.0); 5];
    for i in 0..5 {
        out[i] = lhs[i] - rhs[i];
    }
    out
}

/// (a₀, a₁, a₂) of p(u)/u, scaled by e^{−πiΣσ}.
pub fn quadratic(angles: &AngleSet) -> [Complex64; 3] {
    let p = quartic(angles);
    let scale = Complex64::from_polar(1.0, -PI * angles.sigma().iter().sum::<f64>());
    [p[1] * scale, p[2] * scale, p[3] * scale]
}

pub fn stationary_point(angles: &AngleSet) -> Result<StationaryData> {
    let det = gram_det(angles);
    if det > EUCLIDEAN_TOL {
        return Err(Error::NotHyperbolic(format!("det G = {det:e} > 0")));
    }
    stationary_point_unchecked(angles)
}

fn stationary_point_unchecked(angles: &AngleSet) -> Result<StationaryData> {
    let p0 = quartic(angles)[0];
    let [a0, a1, a2] = quadratic(angles);
    let disc = (a1 * a1 - 4.0 * a0 * a2).sqrt();
    let (lo, hi) = angles.window();
    let mut cands: Vec<(f64, Complex64, f64)> = Vec::new();
    for root in [(-a1 + disc) / (2.0 * a2), (-a1 - disc) / (2.0 * a2)] {
        if (root.norm() - 1.0).abs() > 1e-7 {
            continue;
        }
        let base = root.arg() / TWO_PI;
        let n = (lo - base).ceil();
        let z = base + n;
        if z > lo && z < hi {
            let ref_f = potential_f(angles, z)?.f.re;
            // a near-double root at the Euclidean boundary counts once
            if !cands.iter().any(|c| (c.0 - z).abs() < 1e-6) {
                cands.push((z, root, ref_f));
            }
        }
    }
    cands.sort_by(|x, y| y.2.total_cmp(&x.2));
    let Some(&(zeta0, u0, _)) = cands.first() else {
        return Err(Error::NotHyperbolic(
            "no unit-modulus root in the window".into(),
        ));
    };
    if cands.len() > 1 && (cands[0].2 - cands[1].2).abs() < 1e-12 {
        return Err(Error::NotHyperbolic("two indistinguishable maxima".into()));
    }
    let fpp = potential_f(angles, zeta0)?.fpp;
    Ok(StationaryData {
        zeta0,
        u0,
        a2,
        a1,
        a0,
        fpp,
        p0,
    })
}

/// δ(η₁,η₂,η₃) = (1/8πi)(Li₂(e^{2πi(η₁+η₂+η₃)}) − Σ_cyc Li₂(e^{2πi(η₁+η₂−η₃)})).
pub fn delta_eta(e1: f64, e2: f64, e3: f64) -> Result<Complex64> {
    let sum = e1 + e2 + e3;
    let tol = 1e-12;
    if [e1, e2, e3]
        .iter()
        .any(|e| !(*e >= -tol && *e <= 1.0 + tol))
        || !(sum >= 1.0 - tol && sum <= 2.0 + tol)
    {
        return Err(Error::Domain(format!(
            "δ outside its domain at ({e1}, {e2}, {e3})"
        )));
    }
    Ok(delta_eta_unchecked(e1, e2, e3))
}

/// The same expression without the domain check; vertices with Ση < 1 occur
/// between the ideal and Euclidean regular tetrahedra.
pub fn delta_eta_unchecked(e1: f64, e2: f64, e3: f64) -> Complex64 {
    let sum = e1 + e2 + e3;
    let v = li2_circle(sum)
        - li2_circle(e1 + e2 - e3)
        - li2_circle(e2 + e3 - e1)
        - li2_circle(e3 + e1 - e2);
    v / (8.0 * PI * I)
}

/// Volume with its diagnostics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VolumeData {
    pub vol: f64,
    /// Imaginary part of 2π(F(ζ₀) + Σδ), a pure phase.
    pub im_part: f64,
    pub det_g: f64,
    pub stationary: StationaryData,
    pub f0: Complex64,
    pub delta_sum: Complex64,
}

impl VolumeData {
    /// B = 2π(F(ζ₀) + Σδ).
    pub fn b(&self) -> Complex64 {
        TWO_PI * (self.f0 + self.delta_sum)
    }
}

pub fn volume(angles: &AngleSet) -> Result<VolumeData> {
    let det_g = gram_det(angles);
    let stationary = if det_g.abs() <= EUCLIDEAN_TOL {
        stationary_point_unchecked(angles)?
    } else {
        stationary_point(angles)?
    };
    let f0 = potential_f(angles, stationary.zeta0)?.f;
    let e = angles.eta();
    let mut delta_sum = Complex64::new(0.0, 0.0);
    for v in VERTICES {
        delta_sum += delta_eta_unchecked(e[v[0]], e[v[1]], e[v[2]]);
    }
    let total = TWO_PI * (f0 + delta_sum);
    Ok(VolumeData {
        vol: total.re.abs(),
        im_part: total.im,
        det_g,
        stationary,
        f0,
        delta_sum,
    })
}

/// Rejection-sample θ ∈ (0.05, π − 0.05)⁶ with det G < −1e-3 and a
/// ζ-window wider than 1e-3.
pub fn sample_hyperbolic<R: rand::Rng + ?Sized>(rng: &mut R) -> AngleSet {
    loop {
        let theta: [f64; 6] = std::array::from_fn(|_| rng.gen_range(0.05..PI - 0.05));
        let a = AngleSet { theta };
        let (lo, hi) = a.window();
        if gram_det(&a) < -1e-3 && hi - lo > 1e-3 {
            return a;
        }
    }
}

/// Which overall constant multiplies r^{−3/2}(−det G)^{−1/4}e^{rVol/2π}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum PredictorConstant {
    Sqrt2Pi,
    Sqrt2,
}

impl PredictorConstant {
    pub fn value(self) -> f64 {
        match self {
            PredictorConstant::Sqrt2Pi => 2f64.sqrt() * PI,
            PredictorConstant::Sqrt2 => 2f64.sqrt(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PredictorConstant::Sqrt2Pi => "sqrt2*pi",
            PredictorConstant::Sqrt2 => "sqrt2",
        }
    }
}

/// ln(K r^{−3/2} (−det G)^{−1/4} e^{rVol/2π}) from precomputed volume data.
pub fn predictor_from(vol: &VolumeData, r: u32, k: PredictorConstant) -> Result<f64> {
    if vol.det_g > -EUCLIDEAN_TOL {
        return Err(Error::NearEuclidean(vol.det_g));
    }
    let r = r as f64;
    Ok(k.value().ln() - 1.5 * r.ln() - 0.25 * (-vol.det_g).ln() + r * vol.vol / TWO_PI)
}

pub fn predictor(angles: &AngleSet, r: u32) -> Result<f64> {
    predictor_from(&volume(angles)?, r, PredictorConstant::Sqrt2Pi)
}
