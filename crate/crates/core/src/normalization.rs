//! Curvature of Weyl forms and the Rho-tensor normalization recursion.
//!
//! Curvatures are 2-cochains on `g_-`. The Weyl curvature `W` and the total
//! curvature `K` are related through the Rho-tensor by
//! `W(xi, eta) = K(xi, eta) + [P(xi), eta] - [P(eta), xi]`, and the
//! normalization recursion computes `P` one homogeneity at a time as
//! `P^(l) = box^{-1} d* K^(l) - d alpha_l`, where `alpha_l` in `g_l` removes the
//! components of `box^{-1} d* K^(l)` with values outside `p_+`.
//!
//! The recursion uses `W^(l) = K^(l) - d P^(l)` as its normality condition.
//! With the differential of [`crate::cohomology`] the bracket formula above
//! equals `K + d P + P([xi, eta])` instead; [`relation_defect`] measures the
//! difference between the two readings on given data.

use std::sync::Arc;

use num_traits::Zero;

use crate::algebra::Element;
use crate::cohomology::{Cochain, CochainComplex};
use crate::error::{Error, Result};
use crate::grading::Grading;
use crate::linalg::Matrix;
use crate::rational::Q;
use crate::weyl::{transform_splitting, value_transform, GradedVector, RhoMap, UpsilonJet};

/// A curvature-type 2-cochain split by target degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureData {
    pub curvature: Cochain,
}

impl CurvatureData {
    pub fn new(curvature: Cochain) -> Result<Self> {
        if curvature.arity() != 2 {
            return Err(Error::ArityOutOfRange(curvature.arity()));
        }
        Ok(Self { curvature })
    }

    /// The `g_-`-valued part.
    pub fn torsion(&self) -> Cochain {
        self.curvature.target_part(|d| d < 0)
    }

    pub fn g0_part(&self) -> Cochain {
        self.curvature.target_part(|d| d == 0)
    }

    pub fn pplus_part(&self) -> Cochain {
        self.curvature.target_part(|d| d > 0)
    }
}

fn expect_arity(c: &Cochain, n: usize) -> Result<()> {
    if c.arity() != n {
        return Err(Error::ArityOutOfRange(c.arity()));
    }
    Ok(())
}

/// All homogeneity components of degree `<= 0` vanish.
pub fn check_regular(w: &Cochain) -> bool {
    w.homogeneity_components().keys().all(|&l| l > 0)
}

pub fn check_flat(w: &Cochain) -> bool {
    w.is_zero()
}

pub fn check_torsion_free(w: &Cochain) -> bool {
    w.target_part(|d| d < 0).is_zero()
}

pub fn check_normal(cx: &CochainComplex, w: &Cochain) -> Result<bool> {
    expect_arity(w, 2)?;
    Ok(cx.codifferential(w)?.is_zero())
}

/// The 2-cochain `(xi, eta) -> [P(xi), eta] - [P(eta), xi]`.
pub fn rho_bracket_term(p: &RhoMap) -> Result<Cochain> {
    let gr = p.cochain().grading().clone();
    let g = gr.algebra();
    let mut gm = gr.gminus();
    gm.sort_unstable();
    let mut entries = Vec::new();
    for (i, &a) in gm.iter().enumerate() {
        let pa = p.cochain().eval_basis(&[a]);
        for &b in &gm[i + 1..] {
            let pb = p.cochain().eval_basis(&[b]);
            let v = &g.bracket(&pa, &g.basis_element(b)) - &g.bracket(&pb, &g.basis_element(a));
            for (t, x) in v.support() {
                entries.push((vec![a, b], t, x.clone()));
            }
        }
    }
    Cochain::from_entries(&gr, 2, entries)
}

/// `W = K + [P(xi), eta] - [P(eta), xi]`.
pub fn weyl_from_total(k: &Cochain, p: &RhoMap) -> Result<Cochain> {
    expect_arity(k, 2)?;
    Ok(k + &rho_bracket_term(p)?)
}

/// `K = W - [P(xi), eta] + [P(eta), xi]`.
pub fn total_from_weyl(w: &Cochain, p: &RhoMap) -> Result<Cochain> {
    expect_arity(w, 2)?;
    Ok(w - &rho_bracket_term(p)?)
}

/// `weyl_from_total(K, P) - (K - d P)`: zero exactly when the bracket formula
/// and the recursion's reading `W = K - d P` agree on this data.
pub fn relation_defect(cx: &CochainComplex, k: &Cochain, p: &RhoMap) -> Result<Cochain> {
    let w = weyl_from_total(k, p)?;
    let dp = cx.differential(p.cochain())?;
    Ok(&w - &(k - &dp))
}

/// Matrix on `g_-` (in [`Grading::gminus`] order) of the splitting transform.
fn splitting_matrix(u: &UpsilonJet) -> Matrix {
    let gr = u.grading();
    let g = gr.algebra();
    let gm = gr.gminus();
    let cols: Vec<Vec<Q>> = gm
        .iter()
        .map(|&a| {
            let xi = GradedVector::from_element(gr, &g.basis_element(a)).expect("g_- basis vector");
            let t = transform_splitting(u, &xi).total();
            gm.iter().map(|&i| t.coeffs[i].clone()).collect()
        })
        .collect();
    Matrix::from_columns(gm.len(), &cols)
}

/// Apply the value transform `Ad(exp(-U_k)...exp(-U_1))` to every value of `w`,
/// keeping the arguments.
pub fn transform_weyl_values(u: &UpsilonJet, w: &Cochain) -> Result<Cochain> {
    expect_arity(w, 2)?;
    let gr = w.grading().clone();
    let mut entries = Vec::new();
    for ((args, t), v) in w.entries() {
        let x = value_transform(u, &gr.algebra().basis_element(*t)).scale(v);
        for (s, y) in x.support() {
            entries.push((args.clone(), s, y.clone()));
        }
    }
    Cochain::from_entries(&gr, 2, entries)
}

/// The Weyl curvature of the new Weyl structure as a 2-cochain in the new splitting:
/// `W^(X, Y) = Ad(g^{-1}) W(S^{-1} X, S^{-1} Y)` with `S` the splitting transform.
pub fn transform_weyl_curvature(u: &UpsilonJet, w: &Cochain) -> Result<Cochain> {
    expect_arity(w, 2)?;
    let gr = w.grading().clone();
    let g = gr.algebra();
    let gm = gr.gminus();
    let sinv = splitting_matrix(u).inverse().expect("splitting transform is unipotent");
    let pre: Vec<Element> = (0..gm.len())
        .map(|c| {
            let mut x = g.zero();
            for (r, &i) in gm.iter().enumerate() {
                x.coeffs[i] = sinv[(r, c)].clone();
            }
            x
        })
        .collect();
    let mut entries = Vec::new();
    for a in 0..gm.len() {
        for b in a + 1..gm.len() {
            let val = w.eval(&[pre[a].clone(), pre[b].clone()]);
            let val = value_transform(u, &val);
            for (t, x) in val.support() {
                entries.push((vec![gm[a], gm[b]], t, x.clone()));
            }
        }
    }
    Cochain::from_entries(&gr, 2, entries)
}

/// `W^^(n) - W^(n) + d Phi` for `Phi` homogeneous of degree `n`.
pub fn w_relation_residual(
    cx: &CochainComplex,
    w_hat: &Cochain,
    w: &Cochain,
    phi: &Cochain,
    n: i32,
) -> Result<Cochain> {
    expect_arity(w_hat, 2)?;
    expect_arity(w, 2)?;
    expect_arity(phi, 1)?;
    if !phi.is_homogeneous(n) {
        return Err(Error::NotHomogeneous { expected: n });
    }
    Ok(&(&w_hat.component(n) - &w.component(n)) + &cx.differential(phi)?)
}

/// `P = box^{-1} d* K0` for a `|1|`-grading, with `K0` of homogeneity 2 and `g_0`-valued.
pub fn normalize_rho_grade1(cx: &CochainComplex, k0: &Cochain) -> Result<RhoMap> {
    let gr = cx.grading();
    if gr.k() != 1 {
        return Err(Error::GradingMismatch(format!(
            "expected a |1|-grading, got |{}|",
            gr.k()
        )));
    }
    expect_arity(k0, 2)?;
    if !k0.is_homogeneous(2) {
        return Err(Error::NotHomogeneous { expected: 2 });
    }
    if k0.entries().keys().any(|(_, t)| gr.degree(*t) != 0) {
        return Err(Error::Precondition("K0 must take values in g0".into()));
    }
    let p = cx.laplacian_inverse(&cx.codifferential(k0)?)?;
    RhoMap::new(p)
}

/// One step of the recursion in homogeneity `ell`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizationStep {
    pub ell: i32,
    /// `P^(ell)`, `p_+`-valued and homogeneous of degree `ell`.
    pub rho: RhoMap,
    /// `alpha_ell` in `g_ell` (zero when `ell > k`).
    pub alpha: Element,
    /// Part of the non-`p_+` restriction of `box^{-1} d* K^(ell)` outside the
    /// restrictions of `d(g_ell)`; zero iff the step is solvable.
    pub obstruction: Cochain,
}

pub fn normalize_rho_step(cx: &CochainComplex, ell: i32, k_ell: &Cochain) -> Result<NormalizationStep> {
    let gr = cx.grading().clone();
    let g = gr.algebra();
    if ell < 2 {
        return Err(Error::Precondition(format!(
            "normalization starts at homogeneity 2, got {ell}"
        )));
    }
    expect_arity(k_ell, 2)?;
    if !k_ell.is_homogeneous(ell) {
        return Err(Error::NotHomogeneous { expected: ell });
    }
    let c = cx.laplacian_inverse(&cx.codifferential(k_ell)?)?;
    let low = c.target_part(|d| d <= 0);
    let basis = gr.component(ell);
    let images: Vec<Cochain> = basis
        .iter()
        .map(|&b| {
            let e = Cochain::from_element(&gr, &g.basis_element(b));
            cx.differential(&e).map(|d| d.target_part(|t| t <= 0))
        })
        .collect::<Result<_>>()?;
    // Orthogonal projection of `low` onto the span of `images`.
    let n = images.len();
    let mut gram = Matrix::zeros(n, n);
    let mut rhs = vec![Q::zero(); n];
    for i in 0..n {
        for j in 0..n {
            gram[(i, j)] = cx.pairing(&images[i], &images[j])?;
        }
        rhs[i] = cx.pairing(&images[i], &low)?;
    }
    let coeffs = gram
        .solve(&rhs)
        .ok_or_else(|| Error::Precondition("normal equations are inconsistent".into()))?;
    let mut alpha = g.zero();
    let mut fit = Cochain::zero(&gr, 1)?;
    for ((&b, a), img) in basis.iter().zip(&coeffs).zip(&images) {
        alpha.coeffs[b] = a.clone();
        fit = &fit + &img.scale(a);
    }
    let obstruction = &low - &fit;
    let d_alpha = cx.differential(&Cochain::from_element(&gr, &alpha))?;
    let rho = RhoMap::new((&c - &d_alpha).target_part(|d| d > 0))?;
    Ok(NormalizationStep {
        ell,
        rho,
        alpha,
        obstruction,
    })
}

#[derive(Clone, Debug)]
pub struct NormalizationRun {
    pub rho: RhoMap,
    pub steps: Vec<NormalizationStep>,
}

impl NormalizationRun {
    pub fn obstructed(&self) -> bool {
        self.steps.iter().any(|s| !s.obstruction.is_zero())
    }
}

/// Homogeneities visited by [`run_normalization`]: `2..=2k`, the range of a `p_+`-valued
/// 1-cochain on `g_-`.
pub fn normalization_range(grading: &Grading) -> std::ops::RangeInclusive<i32> {
    2..=2 * grading.ki()
}

/// Iterate [`normalize_rho_step`]; `provider(ell, P)` returns `K^(ell)` given the
/// components of `P` found so far.
pub fn run_normalization(
    cx: &CochainComplex,
    mut provider: impl FnMut(i32, &RhoMap) -> Result<Cochain>,
) -> Result<NormalizationRun> {
    let gr: Arc<Grading> = cx.grading().clone();
    let mut rho = RhoMap::zero(&gr);
    let mut steps = Vec::new();
    for ell in normalization_range(&gr) {
        let k_ell = provider(ell, &rho)?;
        let step = normalize_rho_step(cx, ell, &k_ell)?;
        rho = RhoMap::new(rho.cochain() + step.rho.cochain())?;
        steps.push(step);
    }
    Ok(NormalizationRun { rho, steps })
}
