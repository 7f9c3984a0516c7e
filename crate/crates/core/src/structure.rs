//! Window-truncated structure computations: center, derived subalgebra,
//! abelianization and the centralizer of the derived subalgebra.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::{
    bracket, bracket_basis, jacobi_residual, BasisVector, Family, LinComb, Params,
};
use crate::halfint::HalfInt;
use crate::linalg::{intersect_with_trailing, nullspace_exact, SparseMatrix, SubspaceBasis};
use crate::scalar::Rat;

/// The finite basis slice `B(N)`: all `L_n, M_n` with `|n| <= N` plus all
/// `Y_a` with `a in s + Z`, `|a| <= N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    radius: i64,
    s: HalfInt,
}

impl Window {
    pub fn new(radius: i64, s: HalfInt) -> Self {
        assert!(radius >= 0, "window radius must be nonnegative");
        Window { radius, s }
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn s(&self) -> HalfInt {
        self.s
    }

    /// Same `s`, larger radius.
    pub fn inflate(&self, margin: i64) -> Window {
        Window::new(self.radius + margin, self.s)
    }

    pub fn contains(&self, b: &BasisVector) -> bool {
        b.is_valid_for(self.s) && b.index.abs().doubled() <= 2 * self.radius
    }

    /// The window basis in canonical order (family `L < M < Y`, then
    /// ascending index).
    pub fn basis(&self) -> Vec<BasisVector> {
        let n = self.radius;
        let mut out = Vec::new();
        for fam in [Family::L, Family::M] {
            for i in -n..=n {
                out.push(BasisVector::new(fam, HalfInt::from_int(i)));
            }
        }
        // Y indices run over s + Z within [-N, N]
        let parity = self.s.doubled().rem_euclid(2);
        let mut d = -2 * n;
        if d.rem_euclid(2) != parity {
            d += 1;
        }
        while d <= 2 * n {
            out.push(BasisVector::new(Family::Y, HalfInt::from_doubled(d)));
            d += 2;
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.basis().len()
    }
}

/// Dense coordinates of `v` over an enumerated basis. Fails if `v` has
/// support outside the enumeration.
pub fn to_coords(v: &LinComb, basis: &[BasisVector]) -> Option<Vec<Rat>> {
    let index: BTreeMap<&BasisVector, usize> =
        basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let mut out = vec![Rat::zero(); basis.len()];
    for (b, c) in v.iter() {
        let i = index.get(b)?;
        out[*i] = c.clone();
    }
    Some(out)
}

pub fn from_coords(coords: &[Rat], basis: &[BasisVector]) -> LinComb {
    let mut out = LinComb::zero();
    for (c, b) in coords.iter().zip(basis.iter()) {
        out.add_term(*b, c.clone());
    }
    out
}

/// `{v in span B(N) : [v, b] = 0 for all b in B(N)}`, as an echelonized
/// basis. Brackets are evaluated in the full algebra; output coordinates
/// falling outside the window still impose constraints.
pub fn center_window(p: &Params, w: &Window) -> SubspaceBasis {
    let basis = w.basis();
    constrain_to_commutant(p, w, basis.iter().map(|b| LinComb::basis(*b)))
}

/// `{v in span B(N) : [v, d] = 0 for every derived-subalgebra basis vector}`.
pub fn centralizer_of_derived(p: &Params, w: &Window, margin: i64) -> SubspaceBasis {
    let derived = derived_window(p, w, margin);
    let basis = w.basis();
    let gens: Vec<LinComb> = derived
        .vectors()
        .iter()
        .map(|coords| from_coords(coords, &basis))
        .collect();
    constrain_to_commutant(p, w, gens)
}

fn constrain_to_commutant(
    p: &Params,
    w: &Window,
    against: impl IntoIterator<Item = LinComb>,
) -> SubspaceBasis {
    let basis = w.basis();
    // rows keyed by (generator index, output basis vector)
    let mut row_index: BTreeMap<(usize, BasisVector), usize> = BTreeMap::new();
    let mut mat = SparseMatrix::new(0, basis.len());
    for (g, gen) in against.into_iter().enumerate() {
        for (col, e) in basis.iter().enumerate() {
            let out = bracket(&LinComb::basis(*e), &gen, p);
            for (b, c) in out.iter() {
                let row = *row_index.entry((g, *b)).or_insert_with(|| mat.push_row());
                mat.add(row, col, c.clone());
            }
        }
    }
    nullspace_exact(&mat)
}

/// `span{[x, y] : x, y in B(N + margin)}` intersected with `span B(N)`,
/// echelonized over the `B(N)` coordinates.
pub fn derived_window(p: &Params, w: &Window, margin: i64) -> SubspaceBasis {
    let big = w.inflate(margin);
    let big_basis = big.basis();
    let inner_basis = w.basis();

    // Order coordinates with the outside-of-B(N) block first so the
    // trailing-block intersection gives exactly span cap B(N).
    let mut outside: Vec<BasisVector> = big_basis
        .iter()
        .filter(|b| !w.contains(b))
        .cloned()
        .collect();
    outside.sort();
    let mut order: Vec<BasisVector> = outside;
    let n_outside = order.len();
    order.extend(inner_basis.iter().cloned());
    let index: BTreeMap<&BasisVector, usize> =
        order.iter().enumerate().map(|(i, b)| (b, i)).collect();

    let mut gens = Vec::new();
    for (i, x) in big_basis.iter().enumerate() {
        for y in big_basis.iter().skip(i + 1) {
            let out = bracket_basis(x, y, p);
            if out.is_zero() {
                continue;
            }
            let mut v = vec![Rat::zero(); order.len()];
            let mut ok = true;
            for (b, c) in out.iter() {
                match index.get(b) {
                    Some(&j) => v[j] = c.clone(),
                    None => {
                        // bracket escaped even the inflated window; the
                        // generator cannot contribute to span B(N)
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                gens.push(v);
            }
        }
    }
    intersect_with_trailing(order.len(), n_outside, gens)
}

/// `dim span B(N) - dim derived_window`.
pub fn abelianization_dim(p: &Params, w: &Window, margin: i64) -> usize {
    w.dim() - derived_window(p, w, margin).dim()
}

/// Outcome of the exhaustive Jacobi scan over a window.
#[derive(Clone, Debug)]
pub struct JacobiCheck {
    pub ok: bool,
    pub triples_checked: usize,
    /// Lexicographically first failing triple and its residual.
    pub witness: Option<(BasisVector, BasisVector, BasisVector, LinComb)>,
}

/// Checks `jacobi_residual = 0` for every triple from `B(N)`. The residual
/// is alternating in its arguments, so unordered triples suffice.
pub fn jacobi_check_window(p: &Params, w: &Window) -> JacobiCheck {
    let basis = w.basis();
    let mut triples_checked = 0;
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate().skip(i) {
            for z in basis.iter().skip(j) {
                triples_checked += 1;
                let res = jacobi_residual(x, y, z, p);
                if !res.is_zero() {
                    return JacobiCheck {
                        ok: false,
                        triples_checked,
                        witness: Some((*x, *y, *z, res)),
                    };
                }
            }
        }
    }
    JacobiCheck {
        ok: true,
        triples_checked,
        witness: None,
    }
}
