//! Graded pieces of the reduced free Lie ring and Engel relation lattices.
//!
//! Working modulo repeated generators (the shadow of the Milnor relations)
//! keeps every graded piece small: the degree-`d` component on a fixed
//! `d`-subset of generators has rank `(d-1)!`, spanned by left-normed
//! brackets whose first entry is the smallest generator of the subset.
//!
//! [`engel_relations`] builds the integer lattice spanned by the graded
//! Engel relations in one degree, and [`quotient_report`] runs Smith normal
//! form degree by degree. For Engel order 2 the report certifies the
//! classical collapse: degree 3 contributes one factor of 3 per 3-subset
//! and every degree from 4 up dies completely.
//!
//! ```
//! use milnor::lie::quotient_report;
//! let report = quotient_report(4, 4, 2).unwrap();
//! let degree4 = &report.degrees[2];
//! assert_eq!(degree4.free_rank, 0);
//! assert!(degree4.invariant_factors.iter().all(|f| *f == 1u8.into()));
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::words::Word;

/// Errors from basis construction, straightening, and reports.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum LieError {
    #[error("degree {0} is below 2: no bracket lives there")]
    DegreeTooSmall(usize),
    #[error("generator x{index} out of range: context has {gens} generators")]
    GeneratorOutOfRange { index: u32, gens: u32 },
    #[error("expression degree {got} does not match basis degree {expected}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("left-normed bracket needs at least two entries, got {0}")]
    Arity(usize),
    #[error("report degree {degree} exceeds generator count {gens}")]
    DegreeAboveGens { degree: usize, gens: u32 },
    #[error("Engel order must be at least 1, got {0}")]
    OrderTooSmall(u32),
}

/// A formal bracket expression over generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BracketExpr {
    Gen(u32),
    Bracket(Box<BracketExpr>, Box<BracketExpr>),
}

impl BracketExpr {
    pub fn gen(index: u32) -> BracketExpr {
        BracketExpr::Gen(index)
    }

    pub fn bracket(lhs: BracketExpr, rhs: BracketExpr) -> BracketExpr {
        BracketExpr::Bracket(Box::new(lhs), Box::new(rhs))
    }

    /// `[e_1, e_2, ..., e_k]` bracketed left to right.
    pub fn left_normed(entries: &[BracketExpr]) -> Result<BracketExpr, LieError> {
        if entries.len() < 2 {
            return Err(LieError::Arity(entries.len()));
        }
        let mut acc = entries[0].clone();
        for e in &entries[1..] {
            acc = BracketExpr::bracket(acc, e.clone());
        }
        Ok(acc)
    }

    /// Number of generator occurrences, counted with multiplicity.
    pub fn degree(&self) -> usize {
        match self {
            BracketExpr::Gen(_) => 1,
            BracketExpr::Bracket(l, r) => l.degree() + r.degree(),
        }
    }

    fn collect_letters(&self, out: &mut Vec<u32>) {
        match self {
            BracketExpr::Gen(i) => out.push(*i),
            BracketExpr::Bracket(l, r) => {
                l.collect_letters(out);
                r.collect_letters(out);
            }
        }
    }

    /// Generator occurrences in reading order.
    pub fn letters(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect_letters(&mut out);
        out
    }

    /// Distinct generators used.
    pub fn support(&self) -> BTreeSet<u32> {
        self.letters().into_iter().collect()
    }

    /// Group-word realization: brackets become commutators.
    pub fn to_word(&self) -> Word {
        match self {
            BracketExpr::Gen(i) => Word::gen(*i),
            BracketExpr::Bracket(l, r) => Word::commutator(&l.to_word(), &r.to_word()),
        }
    }

    /// Expansion into the free associative ring, `[a,b] = ab - ba`.
    pub fn assoc_poly(&self) -> BTreeMap<Vec<u32>, BigInt> {
        match self {
            BracketExpr::Gen(i) => {
                let mut m = BTreeMap::new();
                m.insert(vec![*i], BigInt::one());
                m
            }
            BracketExpr::Bracket(l, r) => {
                let a = l.assoc_poly();
                let b = r.assoc_poly();
                let mut out: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
                for (m1, c1) in &a {
                    for (m2, c2) in &b {
                        let c = c1 * c2;
                        let mut lr = m1.clone();
                        lr.extend_from_slice(m2);
                        *out.entry(lr).or_insert_with(BigInt::zero) += &c;
                        let mut rl = m2.clone();
                        rl.extend_from_slice(m1);
                        *out.entry(rl).or_insert_with(BigInt::zero) -= &c;
                    }
                }
                out.retain(|_, c| !c.is_zero());
                out
            }
        }
    }

    fn flatten(&self) -> Vec<&BracketExpr> {
        match self {
            BracketExpr::Bracket(l, r) => {
                let mut items = l.flatten();
                items.push(r);
                items
            }
            other => vec![other],
        }
    }
}

impl fmt::Display for BracketExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketExpr::Gen(i) => write!(f, "x{i}"),
            BracketExpr::Bracket(..) => {
                write!(f, "[")?;
                for (k, item) in self.flatten().iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{item}")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// Deterministic basis of one graded piece of the reduced free Lie ring.
///
/// Elements are letter sequences of left-normed brackets: the sequence
/// `[m, p_2, ..., p_d]` stands for `[x_m, x_{p_2}, ..., x_{p_d}]` with `m`
/// the smallest generator of its subset. Subsets run in lexicographic
/// order, permutations likewise.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LieBasis {
    gens: u32,
    degree: usize,
    elements: Vec<Vec<u32>>,
    index: BTreeMap<Vec<u32>, usize>,
}

/// Basis of the multilinear degree-`d` piece on `n` generators.
///
/// Degrees above `n` have no repetition-free brackets; the basis is empty.
pub fn build_basis(n: u32, d: usize) -> Result<LieBasis, LieError> {
    if d < 2 {
        return Err(LieError::DegreeTooSmall(d));
    }
    let mut elements = Vec::new();
    if d <= n as usize {
        for subset in (1..=n).combinations(d) {
            let min = subset[0];
            for perm in subset[1..].iter().copied().permutations(d - 1) {
                let mut seq = Vec::with_capacity(d);
                seq.push(min);
                seq.extend(perm);
                elements.push(seq);
            }
        }
    }
    let index = elements
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), i))
        .collect();
    Ok(LieBasis {
        gens: n,
        degree: d,
        elements,
        index,
    })
}

impl LieBasis {
    pub fn gens(&self) -> u32 {
        self.gens
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Vec<u32>] {
        &self.elements
    }

    /// Left-normed bracket expression of one basis element.
    pub fn expr(&self, i: usize) -> BracketExpr {
        let entries: Vec<BracketExpr> = self.elements[i].iter().map(|&g| BracketExpr::gen(g)).collect();
        BracketExpr::left_normed(&entries).expect("basis elements have degree >= 2")
    }

    /// Bracket notation of one basis element, e.g. `[x1,x3,x2]`.
    pub fn element_display(&self, i: usize) -> String {
        format!(
            "[{}]",
            self.elements[i].iter().map(|g| format!("x{g}")).join(",")
        )
    }

    /// Associative-polynomial realization of a coordinate vector.
    pub fn realize(&self, coords: &[BigInt]) -> BTreeMap<Vec<u32>, BigInt> {
        let mut out: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (mono, a) in self.expr(i).assoc_poly() {
                let entry = out.entry(mono).or_insert_with(BigInt::zero);
                *entry += c * a;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }
}

/// Coordinates of a multilinear bracket expression over `basis`.
///
/// Expressions with a repeated generator straighten to the zero vector.
/// The coordinates are read off the associative expansion: a left-normed
/// bracket headed by the smallest generator of the subset contributes
/// exactly one monomial starting with that generator, so those monomials'
/// coefficients are the coordinates.
pub fn straighten(expr: &BracketExpr, basis: &LieBasis) -> Result<Vec<BigInt>, LieError> {
    if expr.degree() != basis.degree {
        return Err(LieError::DegreeMismatch {
            expected: basis.degree,
            got: expr.degree(),
        });
    }
    let letters = expr.letters();
    for &l in &letters {
        if l == 0 || l > basis.gens {
            return Err(LieError::GeneratorOutOfRange {
                index: l,
                gens: basis.gens,
            });
        }
    }
    let mut coords = vec![BigInt::zero(); basis.rank()];
    let mut sorted = letters.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Ok(coords);
    }
    let min = sorted[0];
    for (mono, c) in expr.assoc_poly() {
        if mono[0] != min {
            continue;
        }
        let i = *basis
            .index
            .get(&mono)
            .expect("min-first multilinear monomial must be a basis key");
        coords[i] = c;
    }
    Ok(coords)
}

/// Integer span of graded relation rows inside one `LieBasis`.
#[derive(Clone, Debug)]
pub struct RelationLattice {
    pub basis: LieBasis,
    pub rows: Vec<Vec<BigInt>>,
}

impl RelationLattice {
    pub fn degree(&self) -> usize {
        self.basis.degree()
    }
}

/// All graded elements of one degree, as bracket expressions.
fn graded_elements(n: u32, degree: usize) -> Vec<BracketExpr> {
    if degree == 1 {
        return (1..=n).map(BracketExpr::gen).collect();
    }
    let basis = build_basis(n, degree).expect("degree >= 2");
    (0..basis.rank()).map(|i| basis.expr(i)).collect()
}

/// Fully polarized Engel rows of exactly degree `d`.
///
/// Substituting a sum of independent elements for the arguments of the
/// Engel word `[y, x, ..., x]` and keeping the repetition-free part leaves
/// the symmetrization over the `e` inner slots; everything with a shared
/// support dies in the reduced ring.
fn polarized_rows(n: u32, d: usize, e: u32, basis: &LieBasis) -> Vec<Vec<BigInt>> {
    let e = e as usize;
    if d < e + 1 {
        return Vec::new();
    }
    // Candidates for the polarized slots, keyed for a canonical enumeration
    // order: (degree, position within that degree's element list).
    let mut candidates: Vec<(BracketExpr, BTreeSet<u32>)> = Vec::new();
    for j in 1..=d.saturating_sub(e) {
        for expr in graded_elements(n, j) {
            let support = expr.support();
            candidates.push((expr, support));
        }
    }
    let mut rows = Vec::new();
    for (head, head_support) in &candidates {
        let head_degree = head.degree();
        if head_degree > d - e {
            continue;
        }
        // Choose e support-disjoint slot elements with canonical-order
        // strictly increasing positions; symmetrization makes the choice
        // orderless, so each unordered selection is visited once.
        let mut chosen: Vec<usize> = Vec::with_capacity(e);
        choose_slots(
            &candidates,
            head_support,
            d - head_degree,
            e,
            0,
            &mut chosen,
            &mut |slots| {
                let mut row = vec![BigInt::zero(); basis.rank()];
                for perm in slots.iter().permutations(slots.len()) {
                    let mut entries = vec![head.clone()];
                    entries.extend(perm.iter().map(|&&i| candidates[i].0.clone()));
                    let expr = BracketExpr::left_normed(&entries).expect("e + 1 >= 2 entries");
                    let coords = straighten(&expr, basis).expect("polarized rows stay in range");
                    for (a, b) in row.iter_mut().zip(coords) {
                        *a += b;
                    }
                }
                if row.iter().any(|c| !c.is_zero()) {
                    rows.push(row);
                }
            },
        );
    }
    rows
}

/// Depth-first choice of slot elements: positions strictly increase,
/// supports stay pairwise disjoint and avoid `used`, degrees sum to
/// `remaining`.
fn choose_slots(
    candidates: &[(BracketExpr, BTreeSet<u32>)],
    used: &BTreeSet<u32>,
    remaining: usize,
    slots: usize,
    from: usize,
    chosen: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    if slots == 0 {
        if remaining == 0 {
            emit(chosen);
        }
        return;
    }
    for i in from..candidates.len() {
        let (expr, support) = &candidates[i];
        let deg = expr.degree();
        if deg + (slots - 1) > remaining {
            continue;
        }
        if support.iter().any(|g| used.contains(g)) {
            continue;
        }
        let mut next_used = used.clone();
        next_used.extend(support.iter().copied());
        chosen.push(i);
        choose_slots(candidates, &next_used, remaining - deg, slots - 1, i + 1, chosen, emit);
        chosen.pop();
    }
}

/// Rows obtained by bracketing lower-degree relation rows with generators.
///
/// Bracketing with arbitrary graded elements reduces to iterated
/// generator appends by the Jacobi identity, so this step alone closes the
/// graded ideal degree by degree.
fn append_rows(
    n: u32,
    lower: &RelationLattice,
    basis: &LieBasis,
) -> Vec<Vec<BigInt>> {
    let lower_basis = &lower.basis;
    let mut append_cache: BTreeMap<(u32, usize), Vec<BigInt>> = BTreeMap::new();
    let mut rows = Vec::new();
    for row in &lower.rows {
        for g in 1..=n {
            let mut out = vec![BigInt::zero(); basis.rank()];
            let mut nonzero = false;
            for (i, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let appended = append_cache.entry((g, i)).or_insert_with(|| {
                    let expr = BracketExpr::bracket(lower_basis.expr(i), BracketExpr::gen(g));
                    straighten(&expr, basis).expect("append stays in range")
                });
                for (a, b) in out.iter_mut().zip(appended.iter()) {
                    let delta = c * b;
                    if !delta.is_zero() {
                        *a += delta;
                        nonzero = true;
                    }
                }
            }
            if nonzero && out.iter().any(|c| !c.is_zero()) {
                rows.push(out);
            }
        }
    }
    rows
}

/// Integer row-echelon reduction preserving the row space.
///
/// Used to keep the append step from compounding row counts across
/// degrees; the reduced rows generate the same lattice.
fn row_basis(mut rows: Vec<Vec<BigInt>>, cols: usize) -> Vec<Vec<BigInt>> {
    rows.retain(|r| r.iter().any(|c| !c.is_zero()));
    let mut done: Vec<Vec<BigInt>> = Vec::new();
    for col in 0..cols {
        loop {
            let mut pivot: Option<usize> = None;
            for (i, r) in rows.iter().enumerate() {
                if r[col].is_zero() {
                    continue;
                }
                match pivot {
                    None => pivot = Some(i),
                    Some(p) => {
                        if r[col].abs() < rows[p][col].abs() {
                            pivot = Some(i);
                        }
                    }
                }
            }
            let Some(p) = pivot else { break };
            let pivot_row = rows.swap_remove(p);
            let mut leftover = false;
            for r in rows.iter_mut() {
                if r[col].is_zero() {
                    continue;
                }
                let q = &r[col] / &pivot_row[col];
                if !q.is_zero() {
                    for (a, b) in r.iter_mut().zip(pivot_row.iter()) {
                        *a -= &q * b;
                    }
                }
                if !r[col].is_zero() {
                    leftover = true;
                }
            }
            if leftover {
                // Some remainder is smaller than the pivot; put the pivot
                // row back and pick again.
                rows.push(pivot_row);
            } else {
                done.push(pivot_row);
                break;
            }
        }
        rows.retain(|r| r.iter().any(|c| !c.is_zero()));
    }
    done
}

/// Graded Engel relation lattice in one degree.
///
/// Rows are the fully polarized Engel symmetrizations of total degree `d`
/// together with generator-appends of the lower-degree lattice; together
/// these span the degree-`d` piece of the graded ideal generated by the
/// order-`e` Engel relations.
pub fn engel_relations(n: u32, d: usize, e: u32) -> Result<RelationLattice, LieError> {
    if e < 1 {
        return Err(LieError::OrderTooSmall(e));
    }
    if d < 2 {
        return Err(LieError::DegreeTooSmall(d));
    }
    let mut lattices = build_lattices(n, d, e)?;
    Ok(lattices.pop().expect("build_lattices returns degrees 2..=d"))
}

/// Builds lattices for every degree `2..=max_degree`, reusing the append
/// closure between consecutive degrees.
fn build_lattices(n: u32, max_degree: usize, e: u32) -> Result<Vec<RelationLattice>, LieError> {
    let mut out: Vec<RelationLattice> = Vec::new();
    let mut reduced_lower: Option<RelationLattice> = None;
    for d in 2..=max_degree {
        let basis = build_basis(n, d)?;
        let mut seen: BTreeSet<Vec<BigInt>> = BTreeSet::new();
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for row in polarized_rows(n, d, e, &basis) {
            if seen.insert(row.clone()) {
                rows.push(row);
            }
        }
        if let Some(lower) = &reduced_lower {
            for row in append_rows(n, lower, &basis) {
                if seen.insert(row.clone()) {
                    rows.push(row);
                }
            }
        }
        let lattice = RelationLattice {
            basis: basis.clone(),
            rows,
        };
        reduced_lower = Some(RelationLattice {
            basis,
            rows: row_basis(lattice.rows.clone(), lattice.basis.rank()),
        });
        out.push(lattice);
    }
    Ok(out)
}

/// Smith normal form of an integer matrix, returned as the nonzero
/// invariant factors in divisibility order.
#[allow(clippy::needless_range_loop)]
pub fn smith_normal_form(rows: &[Vec<BigInt>], cols: usize) -> Vec<BigInt> {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .filter(|r| r.iter().any(|c| !c.is_zero()))
        .cloned()
        .collect();
    let nrows = m.len();
    let mut factors = Vec::new();
    let mut t = 0;
    while t < nrows.min(cols) {
        // Smallest nonzero entry of the trailing submatrix becomes the
        // pivot; ties resolve to the lowest (row, col).
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..cols {
                if m[i][j].is_zero() {
                    continue;
                }
                match &pivot {
                    None => pivot = Some((i, j)),
                    Some((pi, pj)) => {
                        if m[i][j].abs() < m[*pi][*pj].abs() {
                            pivot = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        'reduce: loop {
            // Clear the pivot column.
            for i in t + 1..nrows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = &m[i][t] / &m[t][t];
                if !q.is_zero() {
                    for j in t..cols {
                        let s = &q * &m[t][j];
                        m[i][j] -= s;
                    }
                }
                if !m[i][t].is_zero() {
                    // Remainder is strictly smaller: promote it.
                    m.swap(t, i);
                    continue 'reduce;
                }
            }
            // Clear the pivot row.
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = &m[t][j] / &m[t][t];
                if !q.is_zero() {
                    for i in t..nrows {
                        let s = &q * &m[i][t];
                        m[i][j] -= s;
                    }
                }
                if !m[t][j].is_zero() {
                    for row in m.iter_mut() {
                        row.swap(t, j);
                    }
                    continue 'reduce;
                }
            }
            // Make the pivot divide the rest of the submatrix.
            for i in t + 1..nrows {
                for j in t + 1..cols {
                    if (&m[i][j] % &m[t][t]).is_zero() {
                        continue;
                    }
                    for k in t..cols {
                        let add = m[i][k].clone();
                        m[t][k] += add;
                    }
                    continue 'reduce;
                }
            }
            break;
        }
        factors.push(m[t][t].abs());
        t += 1;
    }
    factors
}

/// One degree of a quotient report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeReport {
    pub degree: usize,
    pub basis_rank: usize,
    pub relation_rows: usize,
    /// Nonzero invariant factors, divisibility-ordered.
    pub invariant_factors: Vec<BigInt>,
    pub free_rank: usize,
}

/// Per-degree Smith normal forms of the Engel relation lattices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientReport {
    pub gens: u32,
    pub engel_order: u32,
    pub max_degree: usize,
    pub degrees: Vec<DegreeReport>,
}

/// Runs the graded computation for every degree `2..=max_degree`.
///
/// Each degree quotients the graded basis lattice by the span of the
/// relation rows. The rows generate the graded ideal of the Engel
/// relations, so every reported quotient is an upper bound certificate
/// for the corresponding graded quotient of the group.
pub fn quotient_report(n: u32, max_degree: usize, e: u32) -> Result<QuotientReport, LieError> {
    if e < 1 {
        return Err(LieError::OrderTooSmall(e));
    }
    if max_degree < 2 {
        return Err(LieError::DegreeTooSmall(max_degree));
    }
    if max_degree > n as usize {
        return Err(LieError::DegreeAboveGens {
            degree: max_degree,
            gens: n,
        });
    }
    let lattices = build_lattices(n, max_degree, e)?;
    let degrees = lattices
        .into_iter()
        .map(|lattice| {
            let basis_rank = lattice.basis.rank();
            let factors = smith_normal_form(&lattice.rows, basis_rank);
            DegreeReport {
                degree: lattice.basis.degree(),
                basis_rank,
                relation_rows: lattice.rows.len(),
                free_rank: basis_rank - factors.len(),
                invariant_factors: factors,
            }
        })
        .collect();
    Ok(QuotientReport {
        gens: n,
        engel_order: e,
        max_degree,
        degrees,
    })
}

impl fmt::Display for QuotientReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Engel quotient report: {} generators, Engel order {}, degrees 2..={}",
            self.gens, self.engel_order, self.max_degree
        )?;
        for d in &self.degrees {
            writeln!(
                f,
                "degree {}: basis rank {}, relation rows {}, invariant factors [{}], free rank {}",
                d.degree,
                d.basis_rank,
                d.relation_rows,
                d.invariant_factors.iter().join(", "),
                d.free_rank
            )?;
        }
        write!(
            f,
            "Rows span the graded ideal of the Engel relations; each degree is the\n\
             Smith normal form of that span inside the graded basis lattice, an\n\
             upper bound certificate for the graded quotient of the group."
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(entries: &[u32]) -> BracketExpr {
        let exprs: Vec<BracketExpr> = entries.iter().map(|&g| BracketExpr::gen(g)).collect();
        BracketExpr::left_normed(&exprs).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn basis_sizes_match_factorials() {
        assert_eq!(build_basis(2, 2).unwrap().rank(), 1);
        assert_eq!(build_basis(3, 3).unwrap().rank(), 2);
        assert_eq!(build_basis(4, 4).unwrap().rank(), 6);
        assert_eq!(build_basis(4, 3).unwrap().rank(), 8); // 4 subsets x 2
        assert_eq!(build_basis(3, 4).unwrap().rank(), 0); // above the alphabet
        assert_eq!(build_basis(3, 1), Err(LieError::DegreeTooSmall(1)));
    }

    #[test]
    fn straighten_antisymmetry_and_jacobi() {
        let basis = build_basis(3, 3).unwrap();
        // Basis order: [x1,x2,x3], [x1,x3,x2].
        assert_eq!(straighten(&b(&[1, 2, 3]), &basis).unwrap(), ints(&[1, 0]));
        assert_eq!(straighten(&b(&[2, 1, 3]), &basis).unwrap(), ints(&[-1, 0]));
        // [[x2,x3],x1] = [[x1,x3],x2] - [[x1,x2],x3].
        assert_eq!(straighten(&b(&[2, 3, 1]), &basis).unwrap(), ints(&[-1, 1]));
    }

    #[test]
    fn straighten_kills_repeats() {
        let basis = build_basis(3, 3).unwrap();
        assert_eq!(straighten(&b(&[1, 2, 1]), &basis).unwrap(), ints(&[0, 0]));
        let doubled = BracketExpr::bracket(
            BracketExpr::bracket(BracketExpr::gen(1), BracketExpr::gen(1)),
            BracketExpr::gen(2),
        );
        assert_eq!(straighten(&doubled, &basis).unwrap(), ints(&[0, 0]));
    }

    #[test]
    fn straighten_rejects_wrong_degree_and_range() {
        let basis = build_basis(3, 3).unwrap();
        assert_eq!(
            straighten(&b(&[1, 2]), &basis),
            Err(LieError::DegreeMismatch { expected: 3, got: 2 })
        );
        assert_eq!(
            straighten(&b(&[1, 2, 4]), &basis),
            Err(LieError::GeneratorOutOfRange { index: 4, gens: 3 })
        );
    }

    #[test]
    fn engel_rows_degree_three() {
        let lattice = engel_relations(3, 3, 2).unwrap();
        let rows: BTreeSet<Vec<BigInt>> = lattice.rows.iter().cloned().collect();
        let expected: BTreeSet<Vec<BigInt>> =
            [ints(&[1, 1]), ints(&[-2, 1]), ints(&[1, -2])].into_iter().collect();
        assert_eq!(rows, expected);
    }

    #[test]
    fn no_engel_rows_below_the_first_interesting_degree() {
        assert!(engel_relations(2, 2, 2).unwrap().rows.is_empty());
        assert!(engel_relations(5, 3, 3).unwrap().rows.is_empty());
    }

    #[test]
    fn smith_normal_form_small_cases() {
        assert_eq!(
            smith_normal_form(&[ints(&[2, 4]), ints(&[6, 8])], 2),
            ints(&[2, 4])
        );
        assert_eq!(
            smith_normal_form(&[ints(&[1, 1]), ints(&[-2, 1]), ints(&[1, -2])], 2),
            ints(&[1, 3])
        );
        assert_eq!(smith_normal_form(&[ints(&[0, 0])], 2), ints(&[]));
    }

    #[test]
    fn quotient_report_two_engel_small() {
        let report = quotient_report(4, 4, 2).unwrap();
        assert_eq!(report.degrees.len(), 3);
        let d2 = &report.degrees[0];
        assert_eq!((d2.degree, d2.free_rank), (2, 6));
        assert!(d2.invariant_factors.is_empty());
        let d3 = &report.degrees[1];
        assert_eq!(d3.free_rank, 0);
        let threes = d3.invariant_factors.iter().filter(|f| **f == BigInt::from(3)).count();
        let ones = d3.invariant_factors.iter().filter(|f| **f == BigInt::one()).count();
        assert_eq!((ones, threes), (4, 4)); // one factor of 3 per 3-subset
        let d4 = &report.degrees[2];
        assert_eq!(d4.free_rank, 0);
        assert!(d4.invariant_factors.iter().all(|f| f.is_one()));
    }

    #[test]
    fn report_rejects_bad_arguments() {
        assert_eq!(
            quotient_report(3, 4, 2),
            Err(LieError::DegreeAboveGens { degree: 4, gens: 3 })
        );
        assert_eq!(quotient_report(3, 3, 0), Err(LieError::OrderTooSmall(0)));
    }

    #[test]
    fn realize_matches_assoc_expansion() {
        let basis = build_basis(3, 3).unwrap();
        let coords = straighten(&b(&[2, 3, 1]), &basis).unwrap();
        assert_eq!(basis.realize(&coords), b(&[2, 3, 1]).assoc_poly());
    }
}
