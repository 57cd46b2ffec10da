//! The standard Podleś sphere: the operators `A = γ*γ`, `B = α*γ`, their
//! relations, the Fredholm module on `L²(E_1) ⊕ L²(E_{-1})`, commutator
//! tails and truncated Fredholm indices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SparseMat;
use crate::peterweyl::{
    d, half, r, word_op, BandedOperator, BasisIndex, Generator, GeneratorOps, SpaceKind, TruncatedSpace,
};
use crate::qnum::{HalfInt, Precision, QParam};
use crate::report::{anchors, Check, VerificationReport};

/// Singular-value threshold for rank decisions.
pub const RANK_THRESHOLD: f64 = 1e-8;
/// Singular values within this factor of the threshold are refused.
pub const RANK_GUARD: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PodlesKind {
    A,
    B,
    BStar,
}

/// One of `A`, `B`, `B*` as a band-width-1 operator with `Δj = 0`.
#[derive(Clone, Debug)]
pub struct PodlesOperator {
    pub which: PodlesKind,
    pub table: BandedOperator,
}

fn admissible(l: i64, i: i64, j: i64) -> bool {
    l >= 0 && i.abs() <= l && j.abs() <= l
}

/// Coefficients of `A e^(l)_{i,j}` on `e^(l+Δl)_{i,j}`, keyed by doubled `Δl`.
fn a_terms(q: QParam, l: i64, i: i64, j: i64) -> Vec<(i64, f64)> {
    let mut out = Vec::with_capacity(3);
    if admissible(l - 2, i, j) {
        let v = -q.pow(half(2 * l + i + j - 2)) * r(q, l - j) * r(q, l + i) * r(q, l + j) * r(q, l - i)
            / (r(q, 2 * l - 2) * d(q, 2 * l) * r(q, 2 * l + 2));
        out.push((-2, v));
    }
    let mut mid = q.pow(l + j) * d(q, l - j + 2) * d(q, l + i + 2) / (d(q, 2 * l + 2) * d(q, 2 * l + 4));
    if l > 0 {
        mid += q.pow(l + i) * d(q, l + j) * d(q, l - i) / (d(q, 2 * l) * d(q, 2 * l + 2));
    }
    out.push((0, mid));
    let v = -q.pow(half(2 * l + i + j + 2)) * r(q, l + j + 2) * r(q, l - i + 2) * r(q, l - j + 2) * r(q, l + i + 2)
        / (d(q, 2 * l + 4) * r(q, 2 * l + 6) * r(q, 2 * l + 2));
    out.push((2, v));
    out
}

/// Coefficients of `B e^(l)_{i,j}` on `e^(l+Δl)_{i+1,j}`.
fn b_terms(q: QParam, l: i64, i: i64, j: i64) -> Vec<(i64, f64)> {
    let mut out = Vec::with_capacity(3);
    if admissible(l - 2, i + 2, j) {
        let v = q.pow(half(3 * l + 2 * i + j)) * r(q, l - j) * r(q, l - i - 2) * r(q, l + j) * r(q, l - i)
            / (r(q, 2 * l - 2) * d(q, 2 * l) * r(q, 2 * l + 2));
        out.push((-2, v));
    }
    if admissible(l, i + 2, j) {
        let mut v = -q.pow(half(3 * l + i + 2 * j + 4)) * d(q, l - j + 2) * r(q, l - i) * r(q, l + i + 2)
            / (d(q, 2 * l + 2) * d(q, 2 * l + 4));
        if l > 0 {
            v += q.pow(half(l + i)) * d(q, l + j) * r(q, l + i + 2) * r(q, l - i) / (d(q, 2 * l) * d(q, 2 * l + 2));
        }
        out.push((0, v));
    }
    if admissible(l + 2, i + 2, j) {
        let v = -q.pow(half(l + j)) * r(q, l + j + 2) * r(q, l + i + 4) * r(q, l - j + 2) * r(q, l + i + 2)
            / (d(q, 2 * l + 4) * r(q, 2 * l + 6) * r(q, 2 * l + 2));
        out.push((2, v));
    }
    out
}

/// Materializes `A`, `B` or `B*` on `space` (full or a line bundle).
pub fn podles_op(which: PodlesKind, q: QParam, space: TruncatedSpace) -> Result<PodlesOperator> {
    if !q.is_strict() {
        return Err(Error::InvalidQ(q.value()));
    }
    let table = match which {
        PodlesKind::BStar => podles_op(PodlesKind::B, q, space)?.table.adjoint(),
        PodlesKind::A | PodlesKind::B => {
            let di = if which == PodlesKind::A { 0 } else { 2 };
            let mut mat = SparseMat::zeros(space.dim(), space.dim());
            for (col, src) in space.basis().iter().enumerate() {
                let (l, i, j) = (src.l.twice(), src.i.twice(), src.j.twice());
                let terms = if which == PodlesKind::A { a_terms(q, l, i, j) } else { b_terms(q, l, i, j) };
                for (dl, v) in terms {
                    if let Some(row) = space.position(l + dl, i + di, j) {
                        mat.add_entry(row, col, v);
                    }
                }
            }
            BandedOperator::from_matrix(space, space, HalfInt::ONE, mat)
        }
    };
    Ok(PodlesOperator { which, table })
}

/// Checks `A = A*`, `AB = q²BA`, `BB* = q^{-2}A(1-A)`, `B*B = A(1-q²A)` and
/// that the tables agree with the composites `γ*γ`, `α*γ`.
pub fn check_podles_relations(q: QParam, lmax: HalfInt, precision: &Precision) -> Result<VerificationReport> {
    if lmax < HalfInt::from_int(3) {
        return Err(Error::Usage(format!("podles relations need lmax >= 3, got {lmax}")));
    }
    let space = TruncatedSpace::full(lmax)?;
    let a = podles_op(PodlesKind::A, q, space)?.table;
    let b = podles_op(PodlesKind::B, q, space)?.table;
    let bs = b.adjoint();
    let one = BandedOperator::identity(space);
    let q2 = q.value() * q.value();
    let tol = precision.tol_identity;

    let mut rep = VerificationReport::new("podles");
    rep.param("q", q.value()).param("lmax", lmax.to_string());
    let sym = a.interior_residual(&a.adjoint())?;
    rep.push(Check::residual("A = A*", anchors::PODLES_RELATIONS, sym, tol));
    let ab = a.compose(&b)?.add_scaled(-q2, &b.compose(&a)?)?;
    rep.push(Check::residual("AB = q^2 BA", anchors::PODLES_RELATIONS, ab.interior_norm(), tol));
    let one_minus_a = one.add_scaled(-1.0, &a)?;
    let bbs = b.compose(&bs)?.add_scaled(-1.0 / q2, &a.compose(&one_minus_a)?)?;
    rep.push(Check::residual("BB* = q^-2 A(1-A)", anchors::PODLES_RELATIONS, bbs.interior_norm(), tol));
    let one_minus_q2a = one.add_scaled(-q2, &a)?;
    let bsb = bs.compose(&b)?.add_scaled(-1.0, &a.compose(&one_minus_q2a)?)?;
    rep.push(Check::residual("B*B = A(1-q^2 A)", anchors::PODLES_RELATIONS, bsb.interior_norm(), tol));

    let gens = GeneratorOps::regular(q, space)?;
    let gsg = gens.gamma_star.compose(&gens.gamma)?;
    let asg = gens.alpha_star.compose(&gens.gamma)?;
    rep.push(Check::residual("A table = gamma* gamma", anchors::PODLES_EXPANSIONS, a.interior_residual(&gsg)?, tol));
    rep.push(Check::residual("B table = alpha* gamma", anchors::PODLES_EXPANSIONS, b.interior_residual(&asg)?, tol));
    Ok(rep)
}

/// What acts on both sectors of the Fredholm module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BundleAction {
    Identity,
    Podles(PodlesKind),
    /// A word in the generators with as many raising as lowering letters.
    Word(Vec<Generator>),
}

/// The odd Fredholm module on `L²(E_1) ⊕ L²(E_{-1})` with `F` swapping
/// `e^(l)_{i,1/2} ↔ e^(l)_{i,-1/2}`.
#[derive(Clone, Debug)]
pub struct FredholmModule {
    pub q: QParam,
    pub plus_space: TruncatedSpace,
    pub minus_space: TruncatedSpace,
}

impl FredholmModule {
    pub fn new(q: QParam, lmax: HalfInt) -> Result<Self> {
        if !q.is_strict() {
            return Err(Error::InvalidQ(q.value()));
        }
        Ok(FredholmModule {
            q,
            plus_space: TruncatedSpace::bundle(1, lmax)?,
            minus_space: TruncatedSpace::bundle(-1, lmax)?,
        })
    }

    /// `F` on the direct sum (plus sector first).
    pub fn f_matrix(&self) -> SparseMat {
        let n = self.plus_space.dim();
        let mut f = SparseMat::zeros(2 * n, 2 * n);
        for b in self.plus_space.basis() {
            let p = self.plus_space.index_of(&b).expect("own basis");
            let mirror = BasisIndex { j: -b.j, ..b };
            let m = self.minus_space.index_of(&mirror).expect("same spins in both sectors");
            f.add_entry(n + m, p, 1.0);
            f.add_entry(p, n + m, 1.0);
        }
        f
    }

    fn action_on(&self, x: &BundleAction, space: TruncatedSpace) -> Result<BandedOperator> {
        match x {
            BundleAction::Identity => Ok(BandedOperator::identity(space)),
            BundleAction::Podles(k) => Ok(podles_op(*k, self.q, space)?.table),
            BundleAction::Word(w) => {
                let net: i64 = w.iter().map(|g| g.dk()).sum();
                if net != 0 {
                    return Err(Error::Domain(format!("word {w:?} does not preserve line bundles")));
                }
                word_op(w, self.q, space)
            }
        }
    }

    /// Block-diagonal action `diag(x|E_1, x|E_{-1})` and its band width.
    pub fn action_matrix(&self, x: &BundleAction) -> Result<(SparseMat, HalfInt)> {
        let plus = self.action_on(x, self.plus_space)?;
        let minus = self.action_on(x, self.minus_space)?;
        let n = self.plus_space.dim();
        let mut m = SparseMat::zeros(2 * n, 2 * n);
        for (off, op) in [(0, &plus), (n, &minus)] {
            for c in 0..n {
                for &(r, v) in op.matrix().column(c) {
                    m.add_entry(off + r, off + c, v);
                }
            }
        }
        Ok((m, plus.interior_margin()))
    }
}

/// Norm of `[F, φ(x)]` restricted to spins `l ≥ l0` (within the interior).
pub fn commutator_tail(module: &FredholmModule, x: &BundleAction, l0: HalfInt) -> Result<f64> {
    Ok(commutator_tails(module, x, &[l0])?[0])
}

/// [`commutator_tail`] for several cut-offs, sharing one commutator.
pub fn commutator_tails(module: &FredholmModule, x: &BundleAction, l0s: &[HalfInt]) -> Result<Vec<f64>> {
    let (phi, margin) = module.action_matrix(x)?;
    let cut = module.plus_space.lmax() - margin;
    if let Some(bad) = l0s.iter().find(|&&l0| l0 >= cut) {
        return Err(Error::Truncation(format!("L0 = {bad} must lie below lmax - margin = {cut}")));
    }
    let f = module.f_matrix();
    let comm = f.matmul(&phi).axpy(-1.0, &phi.matmul(&f));
    let n = module.plus_space.dim();
    let basis = module.plus_space.basis();
    Ok(l0s
        .iter()
        .map(|&l0| {
            let cols: Vec<usize> = basis
                .iter()
                .enumerate()
                .filter(|(_, b)| b.l >= l0 && b.l <= cut)
                .flat_map(|(p, _)| [p, n + p])
                .collect();
            comm.restrict_columns(&cols).op_norm()
        })
        .collect())
}

/// The map `e^(l)_{i,j_from} ↦ e^(l)_{i,j_to}` between two line bundles
/// (vectors with no partner are sent to 0).
pub fn identification(from: TruncatedSpace, to: TruncatedSpace) -> Result<BandedOperator> {
    let (SpaceKind::Bundle(k_to), SpaceKind::Bundle(_)) = (to.kind(), from.kind()) else {
        return Err(Error::SpaceMismatch("identification needs two line bundles".into()));
    };
    let j_to = HalfInt::from_twice(k_to);
    let entries =
        from.basis().into_iter().map(|b| (BasisIndex { j: j_to, ..b }, b, 1.0)).filter(|(t, _, _)| to.contains(t));
    BandedOperator::from_entries(from, to, HalfInt::ZERO, entries)
}

/// Kernel and cokernel dimensions of a truncated map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FredholmIndex {
    pub kernel_dim: usize,
    pub cokernel_dim: usize,
    pub index: i64,
}

/// `dim ker − dim coker`, with ranks decided by singular values.
pub fn fredholm_index(map: &BandedOperator) -> Result<FredholmIndex> {
    if map.domain().lmax() != map.codomain().lmax() {
        return Err(Error::SpaceMismatch(format!("truncations differ: {} vs {}", map.domain(), map.codomain())));
    }
    let rank = map.matrix().rank(RANK_THRESHOLD, RANK_GUARD)?;
    let kernel_dim = map.domain().dim() - rank;
    let cokernel_dim = map.codomain().dim() - rank;
    Ok(FredholmIndex { kernel_dim, cokernel_dim, index: kernel_dim as i64 - cokernel_dim as i64 })
}

/// Tail cut-off at which the small-tail criterion is applied.
pub const TAIL_PROBE_L0: i64 = 15;

/// Truncated indices of the two Fredholm pictures and the decay of the
/// commutators `[F, A]`, `[F, B]`.
///
/// Index checks run at every integer truncation `1 ≤ lmax' ≤ lmax`. Tails
/// must be nonincreasing in `L0` with a log-linear fit of `R² > 0.99`
/// (over tails above `1e-13`). The tails at `L0 = 15` are reported in the
/// data section; they behave like `|q|^{L0}`.
pub fn verify_fredholm(q: QParam, lmax: HalfInt) -> Result<(VerificationReport, Vec<(i64, String, f64)>)> {
    if !q.is_strict() {
        return Err(Error::InvalidQ(q.value()));
    }
    let top = lmax.twice().div_euclid(2);
    if top < 4 {
        return Err(Error::Usage(format!("fredholm needs lmax >= 4, got {lmax}")));
    }
    let mut rep = VerificationReport::new("fredholm");
    rep.param("q", q.value()).param("lmax", lmax.to_string());

    let mut odd = Vec::new();
    let mut even = Vec::new();
    let mut even_t = Vec::new();
    for m in 1..=top {
        let lm = HalfInt::from_int(m);
        let f = identification(TruncatedSpace::bundle(1, lm)?, TruncatedSpace::bundle(-1, lm)?)?;
        odd.push(fredholm_index(&f)?.index);
        let fp = identification(TruncatedSpace::bundle(0, lm)?, TruncatedSpace::bundle(-2, lm)?)?;
        even.push(fredholm_index(&fp)?.index);
        even_t.push(fredholm_index(&fp.adjoint())?.index);
    }
    let all = |v: &[i64], x: i64| v.iter().all(|&y| y == x);
    rep.push(
        Check::value("index(F) on (H_1, H_-1) = 0", anchors::THEOREM_4_5_INDEX, odd.clone(), all(&odd, 0))
            .with_note(format!("truncations lmax' = 1..{top}")),
    );
    rep.push(
        Check::value("index(F_+) on (H_0, H_-2) = 1", anchors::THEOREM_4_5_INDEX, even.clone(), all(&even, 1))
            .with_note(format!("truncations lmax' = 1..{top}")),
    );
    rep.push(Check::value(
        "index(F_+^T) on (H_-2, H_0) = -1",
        anchors::THEOREM_4_5_INDEX,
        even_t.clone(),
        all(&even_t, -1),
    ));

    let module = FredholmModule::new(q, lmax)?;
    let cut = lmax - HalfInt::ONE;
    let l0s: Vec<i64> = (1..=top).filter(|&l| HalfInt::from_int(l) < cut).collect();
    let l0h: Vec<HalfInt> = l0s.iter().map(|&l| HalfInt::from_int(l)).collect();
    let mut rows = Vec::new();
    let mut probe = serde_json::Map::new();
    for (kind, name) in [(PodlesKind::A, "A"), (PodlesKind::B, "B")] {
        let tails = commutator_tails(&module, &BundleAction::Podles(kind), &l0h)?;
        let monotone = tails.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12) + 1e-300);
        let (xs, ys): (Vec<f64>, Vec<f64>) =
            l0s.iter().zip(&tails).filter(|(_, &t)| t > 1e-13).map(|(&l, &t)| (l as f64, t.ln())).unzip();
        let fit = crate::linalg::linear_fit(&xs, &ys);
        let r2 = fit.map_or(f64::NAN, |f| f.r_squared);
        rep.push(
            Check::value(format!("[F, {name}] tail nonincreasing in L0"), anchors::FREDHOLM_MODULE, monotone, monotone)
                .with_note(format!("fitted rate {:.4}", fit.map_or(f64::NAN, |f| f.slope.exp()))),
        );
        rep.push(
            Check::value(format!("[F, {name}] tail log-linear fit R^2"), anchors::FREDHOLM_MODULE, r2, r2 > 0.99)
                .with_threshold(0.99),
        );
        if let Some(pos) = l0s.iter().position(|&l| l == TAIL_PROBE_L0) {
            probe.insert(name.to_string(), serde_json::json!(tails[pos]));
        }
        rows.extend(l0s.iter().zip(&tails).map(|(&l, &t)| (l, format!("[F,{name}]"), t)));
    }
    rep.data = Some(serde_json::json!({ "tail_at_l0_15": probe }));
    rep.assume("ranks decided by singular values against 1e-8 with a 10x guard band");
    Ok((rep, rows))
}
