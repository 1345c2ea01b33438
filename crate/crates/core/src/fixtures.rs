//! Seeded random fixtures.
//!
//! Every draw goes through a `ChaCha8Rng` seeded with `seed_from_u64`, so a
//! seed fixes every fixture on every platform. Rationals are `n/d` with `n`
//! uniform in `-5..=5` and `d` uniform in `1..=4`; each coordinate is zero
//! with probability 1/3 to keep the fixtures sparse.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Element;
use crate::cohomology::Cochain;
use crate::grading::Grading;
use crate::linalg::Matrix;
use crate::rational::{self, Q};
use crate::weyl::{GradedVector, RhoMap, UpsilonJet};

pub struct Fixtures {
    rng: ChaCha8Rng,
}

impl Fixtures {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rational(&mut self) -> Q {
        let n = self.rng.gen_range(-5i64..=5);
        let d = self.rng.gen_range(1i64..=4);
        rational::qf(n, d)
    }

    /// A sparse rational, zero with probability 1/3.
    pub fn sparse_rational(&mut self) -> Q {
        if self.rng.gen_range(0..3) == 0 {
            rational::zero()
        } else {
            self.rational()
        }
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// Random combination of the listed basis vectors.
    pub fn element_in(&mut self, dim: usize, indices: &[usize]) -> Element {
        let mut x = Element::zero(dim);
        for &i in indices {
            x.coeffs[i] = self.sparse_rational();
        }
        x
    }

    pub fn homogeneous(&mut self, grading: &Grading, d: i32) -> Element {
        self.element_in(grading.dim(), grading.component(d))
    }

    pub fn gminus_vector(&mut self, grading: &Grading) -> Element {
        self.element_in(grading.dim(), &grading.gminus())
    }

    pub fn graded_vector(&mut self, grading: &Grading) -> GradedVector {
        let x = self.gminus_vector(grading);
        GradedVector::from_element(grading, &x).expect("g_- vector")
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        let mut m = Matrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = self.sparse_rational();
            }
        }
        m
    }

    /// A jet with random `U_m` and random derivative data.
    pub fn jet(&mut self, grading: &Arc<Grading>) -> UpsilonJet {
        let n = grading.gminus().len();
        let mut ups = Vec::new();
        let mut dups = Vec::new();
        for m in 1..=grading.ki() {
            ups.push(self.homogeneous(grading, m));
            dups.push(self.matrix(grading.component(m).len(), n));
        }
        UpsilonJet::new(grading, ups, dups).expect("well-formed jet")
    }

    /// A jet with random `U_m` and no derivative data.
    pub fn upsilon_only(&mut self, grading: &Arc<Grading>) -> UpsilonJet {
        let ups = (1..=grading.ki()).map(|m| self.homogeneous(grading, m)).collect();
        UpsilonJet::from_upsilon(grading, ups).expect("well-formed jet")
    }

    /// Random cochain whose entries satisfy `keep(arguments, target)`.
    pub fn cochain(&mut self, grading: &Arc<Grading>, arity: usize, keep: impl Fn(&[usize], usize) -> bool) -> Cochain {
        let mut gm = grading.gminus();
        gm.sort_unstable();
        let mut entries = Vec::new();
        for args in combinations(&gm, arity) {
            for t in 0..grading.dim() {
                if keep(&args, t) {
                    let v = self.sparse_rational();
                    entries.push((args.clone(), t, v));
                }
            }
        }
        Cochain::from_entries(grading, arity, entries).expect("valid cochain")
    }

    /// Random cochain of one homogeneity.
    pub fn homogeneous_cochain(&mut self, grading: &Arc<Grading>, arity: usize, l: i32) -> Cochain {
        let g = grading.clone();
        self.cochain(grading, arity, move |a, t| Cochain::key_homogeneity(&g, a, t) == l)
    }

    pub fn rho(&mut self, grading: &Arc<Grading>) -> RhoMap {
        let g = grading.clone();
        RhoMap::new(self.cochain(grading, 1, move |_, t| g.degree(t) > 0)).expect("p+ valued")
    }

    /// An element of `g_0`.
    pub fn g0_element(&mut self, grading: &Grading) -> Element {
        self.homogeneous(grading, 0)
    }
}

fn combinations(items: &[usize], n: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    items.iter().copied().combinations(n).collect()
}
