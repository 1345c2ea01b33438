use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use weyl_core::cohomology::{Cochain, CochainComplex};
use weyl_core::fixtures::Fixtures;
use weyl_core::grading::{exp_nilpotent, grade, Grading};
use weyl_core::linalg::Matrix;
use weyl_core::normalization::{
    check_regular, normalize_rho_grade1, transform_weyl_curvature, w_relation_residual, weyl_from_total,
};
use weyl_core::rational::{q, qf};
use weyl_core::weyl::{
    compose_upsilons, delta_connection, delta_rho, delta_splitting, oracle_adexp, oracle_phi, transform_connection,
    transform_degree_bound, transform_rho, transform_splitting, GradedVector, RhoMap, UpsilonJet,
};
use weyl_core::{build_algebra, Element, LieAlgebra, Q};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn graded(s: char, r: usize, crossed: &[usize]) -> Arc<Grading> {
    Arc::new(grade(Arc::new(build_algebra(s, r).unwrap()), crossed).unwrap())
}

const TEST_GRADINGS: [(char, usize, &[usize]); 5] = [
    ('A', 1, &[1]),
    ('A', 2, &[1, 2]),
    ('A', 3, &[2]),
    ('B', 2, &[1]),
    ('C', 2, &[2]),
];

fn test_gradings() -> Vec<Arc<Grading>> {
    TEST_GRADINGS.iter().map(|&(s, r, c)| graded(s, r, c)).collect()
}

fn br(g: &LieAlgebra, x: &Element, y: &Element) -> Element {
    g.bracket(x, y)
}

fn ad_pow(g: &LieAlgebra, x: &Element, n: usize, y: &Element) -> Element {
    (0..n).fold(y.clone(), |acc, _| g.bracket(x, &acc))
}

// ---------------------------------------------------------------- 1

fn algebra_integrity() -> Outcome {
    let start = Instant::now();
    let mut dims = Vec::new();
    for (s, r) in [('A', 1), ('A', 2), ('A', 3), ('B', 2), ('C', 2), ('G', 2)] {
        let g = build_algebra(s, r).unwrap();
        let n = g.dim();
        let basis: Vec<Element> = (0..n).map(|i| g.basis_element(i)).collect();
        let ads: Vec<Matrix> = basis.iter().map(|x| g.ad_matrix(x)).collect();
        let kill = Matrix::from_rows(
            (0..n)
                .map(|i| (0..n).map(|j| ads[i].mul(&ads[j]).trace()).collect())
                .collect(),
        );
        for i in 0..n {
            for j in 0..n {
                ensure(kill[(i, j)] == g.killing_form(&basis[i], &basis[j]), || {
                    format!("{s}{r}: killing form differs from tr(ad ad) at ({i},{j})")
                })?;
                for k in 0..n {
                    let jac = &(&br(&g, &basis[i], &br(&g, &basis[j], &basis[k]))
                        + &br(&g, &basis[j], &br(&g, &basis[k], &basis[i])))
                        + &br(&g, &basis[k], &br(&g, &basis[i], &basis[j]));
                    ensure(jac.is_zero(), || format!("{s}{r}: Jacobi fails at ({i},{j},{k})"))?;
                    let lhs = g.killing_form(&br(&g, &basis[i], &basis[j]), &basis[k]);
                    let rhs = g.killing_form(&basis[i], &br(&g, &basis[j], &basis[k]));
                    ensure(lhs == rhs, || {
                        format!("{s}{r}: Killing invariance fails at ({i},{j},{k})")
                    })?;
                }
            }
        }
        ensure(kill.rank() == n, || format!("{s}{r}: Killing form degenerate"))?;
        dims.push(format!("{s}{r}={n}"));
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(5), || format!("took {t:?}"))?;
    Ok(format!("{} in {:.2?}", dims.join(" "), t))
}

// ---------------------------------------------------------------- 2

fn grading_integrity() -> Outcome {
    let mut summary = Vec::new();
    for gr in test_gradings() {
        let g = gr.algebra();
        let n = gr.dim();
        for i in 0..n {
            for j in 0..n {
                let z = g.bracket(&g.basis_element(i), &g.basis_element(j));
                let want = gr.degree(i) + gr.degree(j);
                ensure(z.support().all(|(c, _)| gr.degree(c) == want), || {
                    format!("bracket degree fails for ({i},{j})")
                })?;
            }
            let y = g.basis_element(i);
            ensure(
                g.bracket(gr.grading_element(), &y) == y.scale(&q(gr.degree(i) as i64)),
                || format!("[E, Y] != jY at basis {i}"),
            )?;
        }
        // span of iterated brackets of g_{-1}
        let gm1: Vec<Element> = gr.component(-1).iter().map(|&i| g.basis_element(i)).collect();
        let mut span = gm1.clone();
        let mut frontier = gm1.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for x in &gm1 {
                for y in &frontier {
                    let z = g.bracket(x, y);
                    if !z.is_zero() {
                        next.push(z);
                    }
                }
            }
            span.extend(next.iter().cloned());
            frontier = next;
        }
        let cols: Vec<Vec<Q>> = span.iter().map(|x| x.coeffs.clone()).collect();
        let rank = Matrix::from_columns(n, &cols).rank();
        ensure(rank == gr.gminus().len(), || {
            format!("g_- not generated by g_-1: {rank}")
        })?;
        summary.push(format!(
            "{}{:?} k={} dims={:?}",
            g.cartan_type(),
            gr.crossed(),
            gr.k(),
            gr.dims()
        ));
    }
    let a2 = graded('A', 2, &[1, 2]);
    ensure(a2.k() == 2 && a2.dims() == vec![1, 2, 2, 2, 1], || {
        "A2 Borel dims".into()
    })?;
    Ok(summary.join("; "))
}

// ---------------------------------------------------------------- 3

fn ad_exp_matrix(gr: &Grading, u: &UpsilonJet) -> Matrix {
    let g = gr.algebra();
    u.upsilons().iter().fold(Matrix::identity(gr.dim()), |acc, x| {
        exp_nilpotent(&g.ad_matrix(&x.scale(&-Q::one()))).mul(&acc)
    })
}

fn apply(m: &Matrix, x: &Element) -> Element {
    Element::from_coeffs(m.mul_vec(&x.coeffs))
}

/// Closed formulas for a `|1|`-grading.
fn ex_one_graded(gr: &Grading, u: &UpsilonJet, p: &RhoMap, xi: &GradedVector) -> (Element, Element, Element) {
    let g = gr.algebra();
    let x = xi.component(-1);
    let up = u.upsilon(1);
    let ux = g.bracket(up, x);
    let gamma = -&ux;
    let rho = &(&p.eval(x) + &u.eval_dupsilon(1, x)) + &g.bracket(up, &ux).scale(&qf(1, 2));
    (x.clone(), gamma, rho)
}

/// Closed formulas for a `|2|`-grading: `(xi^_{-2}, xi^_{-1}, Gamma, P^_1, P^_2)`.
fn ex_two_graded(gr: &Grading, u: &UpsilonJet, p: &RhoMap, xi: &GradedVector) -> [Element; 5] {
    let g = gr.algebra();
    let b = |x: &Element, y: &Element| g.bracket(x, y);
    let (x2, x1) = (xi.component(-2), xi.component(-1));
    let total = xi.total();
    let (u1, u2) = (u.upsilon(1), u.upsilon(2));
    let pxi = p.eval(&total);
    let (p1, p2) = (gr.project(&pxi, 1), gr.project(&pxi, 2));
    let (d1, d2) = (u.eval_dupsilon(1, &total), u.eval_dupsilon(2, &total));
    let half = qf(1, 2);

    let s2 = x2.clone();
    let s1 = x1 - &b(u1, x2);
    let gamma = &(&b(u1, &b(u1, x2)).scale(&half) - &b(u2, x2)) - &b(u1, x1);
    let r1 = [
        p1.clone(),
        ad_pow(g, u1, 3, x2).scale(&qf(-1, 6)),
        b(u2, &b(u1, x2)),
        b(u1, &b(u1, x1)).scale(&half),
        -&b(u2, x1),
        d1.clone(),
    ];
    let r2 = [
        p2,
        -&b(u1, &p1),
        d2,
        b(u1, &d1).scale(&qf(-1, 2)),
        ad_pow(g, u1, 4, x2).scale(&qf(1, 24)),
        b(u2, &b(u1, &b(u1, x2))).scale(&qf(-1, 2)),
        b(u2, &b(u2, x2)).scale(&half),
        ad_pow(g, u1, 3, x1).scale(&qf(-1, 6)),
        b(u2, &b(u1, x1)),
    ];
    let sum = |terms: &[Element]| terms.iter().fold(g.zero(), |acc, t| &acc + t);
    [s2, s1, gamma, sum(&r1), sum(&r2)]
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    for (s, r, c, seed) in [('A', 2, &[1usize, 2][..], 31u64), ('A', 3, &[2][..], 32)] {
        let gr = graded(s, r, c);
        let k = gr.ki();
        let mut f = Fixtures::new(seed);
        for n in 0..200 {
            let (u, p, xi) = (f.jet(&gr), f.rho(&gr), f.graded_vector(&gr));
            let total = xi.total();
            let omega = &total + &p.eval(&total);
            let ad = oracle_adexp(&u, &omega);
            ensure(ad == apply(&ad_exp_matrix(&gr, &u), &omega), || {
                format!("{s}{r} #{n}: adexp")
            })?;
            let phi = oracle_phi(&u, &xi);
            let split = transform_splitting(&u, &xi);
            let conn = transform_connection(&u, &xi);
            let rho = transform_rho(&u, &p, &xi);
            ensure(split.total() == gr.project_range(&ad, -k, -1), || {
                format!("{s}{r} #{n}: splitting")
            })?;
            ensure(conn == gr.project(&ad, 0), || format!("{s}{r} #{n}: connection"))?;
            ensure(rho == &gr.project_range(&ad, 1, k) + &phi, || {
                format!("{s}{r} #{n}: rho")
            })?;
            if gr.k() == 1 {
                let (s1, gamma, r1) = ex_one_graded(&gr, &u, &p, &xi);
                ensure(split.component(-1) == &s1 && conn == gamma && rho == r1, || {
                    format!("{s}{r} #{n}: |1|-graded formulas")
                })?;
            } else {
                let [s2, s1, gamma, r1, r2] = ex_two_graded(&gr, &u, &p, &xi);
                ensure(split.component(-2) == &s2 && split.component(-1) == &s1, || {
                    format!("{s}{r} #{n}: |2|-graded splitting")
                })?;
                ensure(conn == gamma, || format!("{s}{r} #{n}: |2|-graded connection"))?;
                ensure(gr.project(&rho, 1) == r1 && gr.project(&rho, 2) == r2, || {
                    format!("{s}{r} #{n}: |2|-graded rho")
                })?;
            }
        }
        notes.push(format!("{s}{r}{c:?}: 200"));
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(30), || format!("took {t:?}"))?;
    Ok(format!("{} in {:.2?}", notes.join(", "), t))
}

// ---------------------------------------------------------------- 4

/// Coefficient of `t` in the polynomial through `(j, values[j])`, by forward differences.
fn linear_coefficient(values: &[Vec<Q>]) -> Vec<Q> {
    let mut diffs: Vec<Vec<Q>> = values.to_vec();
    let mut out = vec![Q::zero(); values[0].len()];
    for j in 1..values.len() {
        diffs = diffs
            .windows(2)
            .map(|w| w[1].iter().zip(&w[0]).map(|(a, b)| a - b).collect())
            .collect();
        let w = qf(if j % 2 == 1 { 1 } else { -1 }, j as i64);
        for (o, d) in out.iter_mut().zip(&diffs[0]) {
            *o += &w * d;
        }
    }
    out
}

fn infinitesimal_consistency() -> Outcome {
    let mut checked = 0;
    for (s, r, c, seed) in [
        ('A', 2, &[1usize, 2][..], 41u64),
        ('A', 3, &[2][..], 42),
        ('B', 2, &[1][..], 43),
    ] {
        let gr = graded(s, r, c);
        let deg = transform_degree_bound(&gr);
        let mut f = Fixtures::new(seed);
        let count = if s == 'A' && r == 2 { 100 } else { 34 };
        for n in 0..count {
            let (u, p, xi) = (f.jet(&gr), f.rho(&gr), f.graded_vector(&gr));
            let ts: Vec<Q> = (0..=deg).map(|t| q(t as i64)).collect();
            let at = |h: &dyn Fn(&UpsilonJet) -> Element| -> Vec<Q> {
                linear_coefficient(&ts.iter().map(|t| h(&u.scale(t)).coeffs).collect::<Vec<_>>())
            };
            ensure(
                at(&|v| transform_splitting(v, &xi).total()) == delta_splitting(&u, &xi).total().coeffs,
                || format!("{s}{r} #{n}: splitting"),
            )?;
            ensure(
                at(&|v| transform_connection(v, &xi)) == delta_connection(&u, &xi).coeffs,
                || format!("{s}{r} #{n}: connection"),
            )?;
            ensure(
                at(&|v| transform_rho(v, &p, &xi)) == delta_rho(&u, &p, &xi).coeffs,
                || format!("{s}{r} #{n}: rho"),
            )?;
            checked += 1;
        }
    }
    Ok(format!("{checked} fixtures, 3 transforms each"))
}

// ---------------------------------------------------------------- 5

fn unit_cochains(gr: &Arc<Grading>, arity: usize, l: i32) -> Vec<Cochain> {
    let mut gm = gr.gminus();
    gm.sort_unstable();
    let mut out = Vec::new();
    for args in combinations(&gm, arity) {
        for t in 0..gr.dim() {
            if Cochain::key_homogeneity(gr, &args, t) == l {
                out.push(Cochain::from_entries(gr, arity, vec![(args.clone(), t, Q::one())]).unwrap());
            }
        }
    }
    out
}

fn combinations(items: &[usize], n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], n - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

/// Coordinates of each cochain against the unit basis of homogeneity `l`.
fn coordinate_matrix(basis: &[Cochain], images: &[Cochain]) -> Matrix {
    let cols: Vec<Vec<Q>> = images
        .iter()
        .map(|c| {
            basis
                .iter()
                .map(|b| {
                    let key = b.entries().keys().next().unwrap();
                    c.entries().get(key).cloned().unwrap_or_default()
                })
                .collect()
        })
        .collect();
    Matrix::from_columns(basis.len(), &cols)
}

fn hodge_structure() -> Outcome {
    let mut blocks = 0;
    for (gi, gr) in test_gradings().into_iter().enumerate() {
        let cx = CochainComplex::new(gr.clone());
        let mut f = Fixtures::new(50 + gi as u64);
        for _ in 0..10 {
            for n in 0..2 {
                let c = f.cochain(&gr, n, |_, _| true);
                let b = f.cochain(&gr, n + 1, |_, _| true);
                let dc = cx.differential(&c).unwrap();
                ensure(cx.differential(&dc).unwrap().is_zero(), || format!("d^2 on arity {n}"))?;
                let lhs = cx.pairing(&dc, &b).unwrap();
                let rhs = cx.pairing(&c, &cx.codifferential(&b).unwrap()).unwrap();
                ensure(lhs == rhs, || format!("adjointness on arity {n}"))?;
            }
            for n in 2..=3 {
                let c = f.cochain(&gr, n, |_, _| true);
                let s = cx.codifferential(&c).unwrap();
                ensure(cx.codifferential(&s).unwrap().is_zero(), || {
                    format!("(d*)^2 on arity {n}")
                })?;
            }
        }
        for n in 1..=2 {
            let lib = cx.block_ranks(n).unwrap();
            for r in &lib {
                let l = r.homogeneity;
                let basis = unit_cochains(&gr, n, l);
                let down: Vec<Cochain> = unit_cochains(&gr, n - 1, l)
                    .iter()
                    .map(|c| cx.differential(c).unwrap())
                    .collect();
                let up: Vec<Cochain> = unit_cochains(&gr, n + 1, l)
                    .iter()
                    .map(|c| cx.codifferential(c).unwrap())
                    .collect();
                let lap: Vec<Cochain> = basis.iter().map(|c| cx.laplacian(c).unwrap()).collect();
                let rank_d = coordinate_matrix(&basis, &down).rank();
                let rank_s = coordinate_matrix(&basis, &up).rank();
                let harmonic = basis.len() - coordinate_matrix(&basis, &lap).rank();
                ensure(rank_d + rank_s + harmonic == basis.len(), || {
                    format!(
                        "{:?} arity {n} homogeneity {l}: {rank_d}+{rank_s}+{harmonic} != {}",
                        gr.crossed(),
                        basis.len()
                    )
                })?;
                ensure(
                    (r.dim, r.rank_d, r.rank_dstar, r.harmonic) == (basis.len(), rank_d, rank_s, harmonic),
                    || format!("library block ranks differ in homogeneity {l}"),
                )?;
                blocks += 1;
            }
        }
    }
    Ok(format!("{blocks} homogeneity blocks over 5 gradings"))
}

// ---------------------------------------------------------------- 6

fn exceptional_detection() -> Outcome {
    let mut out = Vec::new();
    for (s, r, c, want) in [
        ('A', 1, &[1usize][..], false),
        ('A', 2, &[1][..], false),
        ('A', 3, &[2][..], true),
        ('B', 2, &[1][..], true),
    ] {
        let cx = CochainComplex::new(graded(s, r, c));
        let got = cx.check_h1_condition().unwrap();
        ensure(got == want, || format!("{s}{r}{c:?}: got {got}"))?;
        let h1 = cx.cohomology_dims(1).unwrap();
        let positive: usize = h1.iter().filter(|(l, _)| **l >= 1).map(|(_, d)| d).sum();
        out.push(format!("{s}{r}{c:?}={got} (H1+ dim {positive})"));
    }
    Ok(out.join(", "))
}

// ---------------------------------------------------------------- 7

fn normalization() -> Outcome {
    let gr = graded('A', 3, &[2]);
    let cx = CochainComplex::new(gr.clone());
    let mut f = Fixtures::new(70);
    let mut nonzero = 0;
    for n in 0..100 {
        let g2 = gr.clone();
        let k0 = f.cochain(&gr, 2, move |a, t| {
            g2.degree(t) == 0 && Cochain::key_homogeneity(&g2, a, t) == 2
        });
        let p = normalize_rho_grade1(&cx, &k0).unwrap();
        let rest = &k0 - &cx.differential(p.cochain()).unwrap();
        ensure(cx.codifferential(&rest).unwrap().is_zero(), || {
            format!("K0 #{n}: d*(K0 - dP) != 0")
        })?;
        if !p.is_zero() {
            nonzero += 1;
        }
    }
    let borel = graded('A', 2, &[1, 2]);
    let bcx = CochainComplex::new(borel.clone());
    let mut f = Fixtures::new(71);
    let mut recovered = 0;
    for n in 0..20 {
        let run = weyl_core::checks::synthetic_run(&bcx, &mut f).unwrap();
        ensure(!run.run.obstructed(), || format!("synthetic #{n}: obstruction"))?;
        ensure(run.residual_normal, || {
            format!("synthetic #{n}: residual not d*-closed")
        })?;
        ensure(run.recovered_equals_planted || !run.recovery_expected, || {
            format!("synthetic #{n}: P differs")
        })?;
        if run.recovered_equals_planted {
            recovered += 1;
        }
    }
    Ok(format!(
        "A3[2]: 100 K0 ({nonzero} nonzero P); A2 Borel: 20 runs, {recovered} exact recoveries"
    ))
}

// ---------------------------------------------------------------- 8

fn curvature_invariances() -> Outcome {
    let mut count = 0;
    for (s, r, c, seed) in [
        ('A', 2, &[1usize, 2][..], 80u64),
        ('A', 3, &[2][..], 81),
        ('B', 2, &[1][..], 82),
    ] {
        let gr = graded(s, r, c);
        let g = gr.algebra();
        let cx = CochainComplex::new(gr.clone());
        let gm = gr.gminus();
        let mut f = Fixtures::new(seed);
        let reps = if count == 0 { 50 } else { 25 };
        for n in 0..reps {
            let u = f.upsilon_only(&gr);
            let g2 = gr.clone();
            let w = f.cochain(&gr, 2, move |a, t| Cochain::key_homogeneity(&g2, a, t) > 0);
            ensure(check_regular(&w), String::new)?;
            let hat = transform_weyl_curvature(&u, &w).unwrap();
            ensure(hat.component(1) == w.component(1), || {
                format!("{s}{r} #{n}: W(1) changed")
            })?;

            let k = f.cochain(&gr, 2, |_, _| true);
            let p = f.rho(&gr);
            let wk = weyl_from_total(&k, &p).unwrap();
            for i in -gr.ki() + 2..=1 {
                ensure(wk.component(i) == k.component(i), || {
                    format!("{s}{r} #{n}: W({i}) != K({i})")
                })?;
            }
            let (x, y) = (f.gminus_vector(&gr), f.gminus_vector(&gr));
            let want = &(&k.eval(&[x.clone(), y.clone()]) + &g.bracket(&p.eval(&x), &y)) - &g.bracket(&p.eval(&y), &x);
            ensure(wk.eval(&[x, y]) == want, || format!("{s}{r} #{n}: W-K formula"))?;

            // W~(X, Y) = W(X, Y) - [X, Phi(Y)] + [Y, Phi(X)] + Phi([X, Y]), assembled entrywise.
            let hom = 1 + (n % (2 * gr.ki()));
            let phi = f.homogeneous_cochain(&gr, 1, hom);
            let mut entries = Vec::new();
            for (ai, &a) in gm.iter().enumerate() {
                for &b in &gm[ai + 1..] {
                    let (xa, xb) = (g.basis_element(a), g.basis_element(b));
                    let v = &(&(&w.eval(&[xa.clone(), xb.clone()])
                        - &g.bracket(&xa, &phi.eval(std::slice::from_ref(&xb))))
                        + &g.bracket(&xb, &phi.eval(std::slice::from_ref(&xa))))
                        + &phi.eval(&[g.bracket(&xa, &xb)]);
                    for (t, z) in v.support() {
                        entries.push((vec![a, b], t, z.clone()));
                    }
                }
            }
            let tilde = Cochain::from_entries(&gr, 2, entries).unwrap();
            let resid = w_relation_residual(&cx, &tilde, &w, &phi, hom).unwrap();
            ensure(resid.is_zero(), || format!("{s}{r} #{n}: W-relation residual"))?;
            count += 1;
        }
    }
    Ok(format!("{count} fixtures"))
}

// ---------------------------------------------------------------- 9

fn group_action() -> Outcome {
    let mut count = 0;
    for (s, r, c, seed) in [
        ('A', 2, &[1usize, 2][..], 90u64),
        ('G', 2, &[1, 2][..], 91),
        ('B', 3, &[1, 3][..], 92),
    ] {
        let gr = graded(s, r, c);
        let pplus = gr.pplus();
        let mut f = Fixtures::new(seed);
        let reps = if count == 0 { 50 } else { 25 };
        for n in 0..reps {
            let len = 1 + f.index(5);
            let word: Vec<Element> = (0..len).map(|_| f.element_in(gr.dim(), &pplus)).collect();
            let z = gr.pplus_factorize(&word).unwrap();
            ensure(z.len() == gr.k(), || format!("{s}{r} #{n}: factor count"))?;
            for (i, zi) in z.iter().enumerate() {
                ensure(gr.is_homogeneous(zi, i as i32 + 1), || {
                    format!("{s}{r} #{n}: factor {i} not homogeneous")
                })?;
            }
            let direct = word.iter().fold(Matrix::identity(gr.dim()), |acc, x| {
                acc.mul(&exp_nilpotent(&gr.algebra().ad_matrix(x)))
            });
            let refactored = z.iter().fold(Matrix::identity(gr.dim()), |acc, x| {
                acc.mul(&exp_nilpotent(&gr.algebra().ad_matrix(x)))
            });
            ensure(direct == refactored, || format!("{s}{r} #{n}: round trip"))?;

            let u = f.upsilon_only(&gr);
            let v = f.upsilon_only(&gr);
            let xi = f.graded_vector(&gr);
            let uv = compose_upsilons(&u, &v).unwrap();
            let lhs = transform_splitting(&v, &transform_splitting(&u, &xi));
            ensure(lhs == transform_splitting(&uv, &xi), || {
                format!("{s}{r} #{n}: composition")
            })?;
            let mut prod = u.upsilons().to_vec();
            prod.extend(v.upsilons().iter().cloned());
            ensure(gr.pplus_factorize(&prod).unwrap() == uv.upsilons(), || {
                format!("{s}{r} #{n}: composite factors")
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} words and compositions"))
}

// ---------------------------------------------------------------- 10

fn scale_functionals() -> Outcome {
    let mut count = 0;
    let mut ranks = Vec::new();
    for (gi, gr) in test_gradings().into_iter().enumerate() {
        let g = gr.algebra();
        let mut f = Fixtures::new(100 + gi as u64);
        let pplus = gr.pplus();
        // Candidates: E, and random central elements acting without zero on p_+.
        let center = gr.center_of_g0();
        let mut candidates = vec![gr.grading_element().clone()];
        for _ in 0..3 {
            let z = center.iter().fold(g.zero(), |acc, c| &acc + &c.scale(&f.rational()));
            let acts_nonzero = pplus
                .iter()
                .all(|&b| !g.bracket(&z, &g.basis_element(b)).coeffs[b].is_zero());
            if acts_nonzero {
                candidates.push(z);
            }
        }
        for e in &candidates {
            let l = gr.scale_functional(e).map_err(|err| format!("{err}"))?;
            for n in 0..20 {
                let a = f.g0_element(&gr);
                let ad = g.ad_matrix(&a);
                let ade = g.ad_matrix(e);
                let trace = pplus.iter().fold(Q::zero(), |acc, &b| acc + &ade[(b, b)] * &ad[(b, b)]);
                let want = g.killing_form(e, &a);
                ensure(l.eval(&a) == want, || format!("#{n}: lambda' != B(E, .)"))?;
                ensure(want == q(2) * trace, || format!("#{n}: trace identity"))?;
                count += 1;
            }
            for i in 1..=gr.ki() {
                let rows: Vec<Vec<Q>> = gr
                    .component(i)
                    .iter()
                    .map(|&z| {
                        gr.component(-i)
                            .iter()
                            .map(|&x| l.eval(&g.bracket(&g.basis_element(z), &g.basis_element(x))))
                            .collect()
                    })
                    .collect();
                let rank = Matrix::from_rows(rows).rank();
                ensure(rank == gr.component(i).len(), || {
                    format!("pairing on g_{i} has rank {rank}")
                })?;
            }
        }
        ranks.push(candidates.len());
    }
    ensure(count >= 100, || format!("only {count} elements"))?;
    Ok(format!("{count} g0 elements, scaling elements per grading {ranks:?}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("algebra integrity", algebra_integrity),
        ("grading integrity", grading_integrity),
        ("oracle equivalence", oracle_equivalence),
        ("infinitesimal consistency", infinitesimal_consistency),
        ("hodge structure", hodge_structure),
        ("exceptional-structure detection", exceptional_detection),
        ("normalization", normalization),
        ("curvature invariances", curvature_invariances),
        ("group action", group_action),
        ("scale functionals", scale_functionals),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("[PASS] criterion {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                println!("[FAIL] criterion {:>2} {name}: {detail}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
