//! The generalized Davenport constant of an order: subproduct search,
//! closed-form value, two-sided certificates, and the classical Davenport
//! constant of small abelian groups as a brute-force oracle.

use crate::error::{Error, Result};
use crate::factorization::{is_prime_element, splitting_tag, splitting_type, SplitTag};
use crate::modring::ModRing;
use crate::orders::Order;
use crate::quadint::QuadInt;
use crate::residue::{ResidueField, SubgroupMode, UnitCorrectedSubgroup};

/// Exhaustive subset-scan bound on product length.
pub const MAX_SCAN_LENGTH: usize = 25;

/// Group-order bound for the brute-force group oracle.
pub const MAX_GROUP_ORDER: u64 = 64;

/// How many power lengths the infinite-witness verification scans.
pub const INFINITE_WITNESS_LENGTHS: usize = 10;

/// An ordered list of irreducibles of Z[w]; the factors of a product whose
/// subproducts are scanned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductList {
    factors: Vec<QuadInt>,
}

impl ProductList {
    /// Validates every entry against the prime predicate of the field.
    pub fn new(ctx: &crate::field::FieldContext, factors: Vec<QuadInt>) -> Result<Self> {
        for x in &factors {
            if !is_prime_element(x, ctx)? {
                return Err(Error::Precondition(format!(
                    "{} is not irreducible in Z[w]",
                    x
                )));
            }
        }
        Ok(ProductList { factors })
    }

    /// n copies of one irreducible.
    pub fn repeated(ctx: &crate::field::FieldContext, x: &QuadInt, n: usize) -> Result<Self> {
        ProductList::new(ctx, vec![x.clone(); n])
    }

    pub fn factors(&self) -> &[QuadInt] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

/// A nonempty subset of factor positions and a unit of Z[w] such that
/// unit * prod(subset) lies in the target set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubproductWitness {
    pub indices: Vec<usize>,
    pub unit: QuadInt,
}

#[derive(Clone, Copy, Debug)]
pub struct ScanOptions {
    /// Scan unit multiples u * prod over all of U(Z[w]), not just u = 1.
    pub up_to_units: bool,
    /// Restrict to proper subsets (exclude the full index set).
    pub proper_only: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            up_to_units: true,
            proper_only: false,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Membership {
    InOrder,
    InConductor,
}

#[allow(clippy::too_many_arguments)]
fn combination_scan(
    k: usize,
    start: usize,
    partial: (u64, u64),
    residues: &[(u64, u64)],
    ring: &ModRing,
    unit_residues: &[(u64, u64)],
    accepts: &dyn Fn((u64, u64)) -> bool,
    chosen: &mut Vec<usize>,
) -> Option<(Vec<usize>, usize)> {
    if chosen.len() == k {
        for (ui, ur) in unit_residues.iter().enumerate() {
            if accepts(ring.mul(*ur, partial)) {
                return Some((chosen.clone(), ui));
            }
        }
        return None;
    }
    let need = k - chosen.len();
    for i in start..=(residues.len() - need) {
        chosen.push(i);
        let next = ring.mul(partial, residues[i]);
        if let Some(hit) = combination_scan(
            k,
            i + 1,
            next,
            residues,
            ring,
            unit_residues,
            accepts,
            chosen,
        ) {
            return Some(hit);
        }
        chosen.pop();
    }
    None
}

/// Deterministic subset scan: smallest subsets first, lexicographic within a
/// size, units in their context order. Products are tracked mod f; a found
/// witness is re-verified with exact arithmetic.
fn scan_subproduct(
    list: &ProductList,
    order: &Order,
    opts: ScanOptions,
    membership: Membership,
) -> Result<Option<SubproductWitness>> {
    let n = list.len();
    if n > MAX_SCAN_LENGTH {
        return Err(Error::LengthBoundExceeded {
            len: n,
            max: MAX_SCAN_LENGTH,
        });
    }
    let ctx = order.ctx();
    let ring = ModRing::new(ctx, order.conductor());
    let residues: Vec<_> = list.factors().iter().map(|x| ring.reduce(x)).collect();
    let units: Vec<QuadInt> = if opts.up_to_units {
        ctx.units().to_vec()
    } else {
        vec![QuadInt::one()]
    };
    let unit_residues: Vec<_> = units.iter().map(|u| ring.reduce(u)).collect();
    let accepts = |r| match membership {
        Membership::InOrder => ring.in_order(r),
        Membership::InConductor => ring.in_conductor(r),
    };

    let max_size = if opts.proper_only {
        n.saturating_sub(1)
    } else {
        n
    };
    let mut chosen: Vec<usize> = Vec::new();
    for k in 1..=max_size {
        if let Some((indices, ui)) = combination_scan(
            k,
            0,
            ring.one(),
            &residues,
            &ring,
            &unit_residues,
            &accepts,
            &mut chosen,
        ) {
            let unit = units[ui].clone();
            // exact re-verification
            let mut prod = unit.clone();
            for &i in &indices {
                prod = ctx.mul(&prod, &list.factors()[i]);
            }
            let ok = match membership {
                Membership::InOrder => order.contains(&prod),
                Membership::InConductor => order.conductor_contains(&prod),
            };
            if !ok {
                return Err(Error::Internal(
                    "mod-f scan disagrees with exact arithmetic".into(),
                ));
            }
            return Ok(Some(SubproductWitness { indices, unit }));
        }
    }
    Ok(None)
}

/// Search for a nonempty subproduct (times a unit of Z[w] when
/// `up_to_units`) that lies in the order. Returns the first witness in the
/// (size, lexicographic) scan order, or None after the exhaustive scan.
pub fn find_order_subproduct(
    list: &ProductList,
    order: &Order,
    up_to_units: bool,
) -> Result<Option<SubproductWitness>> {
    scan_subproduct(
        list,
        order,
        ScanOptions {
            up_to_units,
            proper_only: false,
        },
        Membership::InOrder,
    )
}

/// Same scan with explicit options (proper-only variant).
pub fn find_order_subproduct_with(
    list: &ProductList,
    order: &Order,
    opts: ScanOptions,
) -> Result<Option<SubproductWitness>> {
    scan_subproduct(list, order, opts, Membership::InOrder)
}

/// Subproduct landing in the conductor ideal f*Z[w] instead of the order.
pub fn find_conductor_subproduct(
    list: &ProductList,
    order: &Order,
    opts: ScanOptions,
) -> Result<Option<SubproductWitness>> {
    scan_subproduct(list, order, opts, Membership::InConductor)
}

/// For r prime in the conductor ideal: r * prod(P) is irreducible in the
/// order exactly when P has no order-subproduct up to units of Z[w].
pub fn irreducible_with_conductor_prime(
    r: &QuadInt,
    list: &ProductList,
    order: &Order,
) -> Result<bool> {
    if !order.conductor_contains(r) {
        return Err(Error::Precondition(format!(
            "{} is not in the conductor ideal {}Z[w]",
            r,
            order.conductor()
        )));
    }
    if !is_prime_element(r, order.ctx())? {
        return Err(Error::Precondition(format!("{} is not prime in Z[w]", r)));
    }
    Ok(find_order_subproduct(list, order, true)?.is_none())
}

/// Outcome of the generalized Davenport constant for a prime conductor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DavenportOutcome {
    Finite(u64),
    Infinite(InfiniteWitness),
    Unsupported(String),
}

/// Witness family for an infinite constant: powers of a prime above the
/// split conductor never multiply into the order, even up to units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfiniteWitness {
    pub prime: QuadInt,
    /// Power lengths n for which the no-subproduct scan was actually run.
    pub verified_lengths: usize,
    pub reason: String,
}

/// Generalized Davenport constant of Z[p*w] for a rational prime conductor:
/// p + 1 for inert p with d < -3, infinite (with a verified witness family)
/// for split p, unsupported otherwise.
pub fn davenport_of_order(order: &Order) -> Result<DavenportOutcome> {
    let ctx = order.ctx();
    if !ctx.is_ufd() {
        return Err(Error::NonUfdContext(ctx.d()));
    }
    let p = order.conductor();
    if !crate::intfactor::is_prime_u64(p) {
        return Err(Error::CompositeConductor(p));
    }
    match splitting_tag(p, ctx) {
        SplitTag::Split => {
            let st = splitting_type(p, ctx)?;
            for n in 1..=INFINITE_WITNESS_LENGTHS {
                let list = ProductList::repeated(ctx, &st.witness, n)?;
                if find_order_subproduct(&list, order, true)?.is_some() {
                    return Err(Error::Internal(format!(
                        "split prime power ({})^{} acquired an order subproduct",
                        st.witness, n
                    )));
                }
            }
            Ok(DavenportOutcome::Infinite(InfiniteWitness {
                prime: st.witness,
                verified_lengths: INFINITE_WITNESS_LENGTHS,
                reason: "powers of a prime above a split conductor never have an f-divisible \
                         w-coordinate, so no power lies in the order"
                    .into(),
            }))
        }
        SplitTag::Ramified => Ok(DavenportOutcome::Unsupported(format!(
            "conductor {} ramifies in d = {}",
            p,
            ctx.d()
        ))),
        SplitTag::Inert => {
            if ctx.d() < -3 {
                Ok(DavenportOutcome::Finite(p + 1))
            } else {
                Ok(DavenportOutcome::Unsupported(format!(
                    "inert conductor with d = {} is outside the d < -3 scope",
                    ctx.d()
                )))
            }
        }
    }
}

/// Outcome of the exhaustive upper verification of a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UpperCheck {
    /// Every length-(p+1) multiset over the order-(p+1) quotient group has a
    /// nonempty subproduct in the trivial coset; `multisets` were scanned.
    Verified { multisets: u64 },
    /// p > 7: the multiset scan is refused by the budget rule.
    Refused { p: u64 },
}

/// Two-sided certificate for the finite constant: a length-p product with no
/// order subproduct (lower), and the exhaustive quotient-group scan (upper).
#[derive(Clone, Debug)]
pub struct DavenportCertificate {
    pub lower: ProductList,
    pub generator: QuadInt,
    pub upper: UpperCheck,
}

/// Exhaustive bound for the upper scan.
pub const MAX_UPPER_CHECK_PRIME: u64 = 7;

pub fn davenport_certificate(order: &Order, budget: usize) -> Result<DavenportCertificate> {
    let ctx = order.ctx();
    if !ctx.is_ufd() {
        return Err(Error::NonUfdContext(ctx.d()));
    }
    let p = order.conductor();
    if !crate::intfactor::is_prime_u64(p) {
        return Err(Error::CompositeConductor(p));
    }
    if splitting_tag(p, ctx) != SplitTag::Inert || ctx.d() >= -3 {
        return Err(Error::UnsupportedParameters(format!(
            "certificate requires an inert prime conductor and d < -3 (got d = {}, f = {})",
            ctx.d(),
            p
        )));
    }
    let fld = ResidueField::new(ctx, p)?;
    let base = UnitCorrectedSubgroup::new(&fld, ctx, SubgroupMode::BaseField)?;
    let gamma = crate::residue::find_generator_prime(ctx, p, &base, budget)?;
    let lower = ProductList::repeated(ctx, &gamma, p as usize)?;
    if find_order_subproduct(&lower, order, true)?.is_some() {
        return Err(Error::Internal(
            "generator-prime power acquired an order subproduct".into(),
        ));
    }
    let upper = if p <= MAX_UPPER_CHECK_PRIME {
        UpperCheck::Verified {
            multisets: verify_upper(&fld)?,
        }
    } else {
        UpperCheck::Refused { p }
    };
    Ok(DavenportCertificate {
        lower,
        generator: gamma,
        upper,
    })
}

fn upper_multiset_scan(
    start: usize,
    len: usize,
    m: usize,
    stack: &mut Vec<usize>,
    table: &[Vec<usize>],
    one: usize,
    count: &mut u64,
) -> Result<()> {
    if stack.len() == len {
        *count += 1;
        let n = stack.len();
        for mask in 1u32..(1 << n) {
            let mut acc: Option<usize> = None;
            for (i, &g) in stack.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    acc = Some(match acc {
                        None => g,
                        Some(a) => table[a][g],
                    });
                }
            }
            if acc == Some(one) {
                return Ok(());
            }
        }
        return Err(Error::Internal(
            "a quotient-group multiset of full length had no trivial-coset subproduct".into(),
        ));
    }
    for g in start..m {
        stack.push(g);
        upper_multiset_scan(g, len, m, stack, table, one, count)?;
        stack.pop();
    }
    Ok(())
}

/// Scan every length-(p+1) multiset over the canonical cosets of
/// G = F_{p^2}^*/F_p^* and confirm a nonempty subproduct in the trivial
/// coset. Returns the number of multisets scanned.
fn verify_upper(fld: &ResidueField) -> Result<u64> {
    let p = fld.p();
    let mut cosets = Vec::new();
    for a in 0..p {
        cosets.push(fld.canonical_coset(fld.element(a, 1))?);
    }
    cosets.push(fld.one());
    cosets.sort();
    let m = cosets.len();
    debug_assert_eq!(m as u64, p + 1);
    let index_of = |x| {
        cosets
            .binary_search(&x)
            .expect("cosets are closed under products")
    };
    let mut table = vec![vec![0usize; m]; m];
    for i in 0..m {
        for j in 0..m {
            table[i][j] = index_of(fld.canonical_coset(fld.mul(cosets[i], cosets[j]))?);
        }
    }
    let one = index_of(fld.one());
    let mut stack: Vec<usize> = Vec::new();
    let mut count = 0u64;
    upper_multiset_scan(0, m, m, &mut stack, &table, one, &mut count)?;
    Ok(count)
}

/// Finite abelian group given by its invariant factors d1 | d2 | ... | dr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    factors: Vec<u64>,
}

impl GroupSpec {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.contains(&0) {
            return Err(Error::InvalidGroupSpec("factors must be positive".into()));
        }
        for w in factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::InvalidGroupSpec(format!(
                    "{} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(GroupSpec { factors })
    }

    pub fn cyclic(n: u64) -> Self {
        GroupSpec::new(vec![n]).expect("a single factor is always a valid chain")
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u128 {
        self.factors.iter().map(|&f| f as u128).product()
    }

    /// Element tuples in mixed-radix order; index 0 is the identity.
    fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for &f in &self.factors {
            let mut next = Vec::with_capacity(out.len() * f as usize);
            for head in &out {
                for v in 0..f {
                    let mut t = head.clone();
                    t.push(v);
                    next.push(t);
                }
            }
            out = next;
        }
        out
    }

    fn add_table(&self) -> Vec<Vec<usize>> {
        let elems = self.elements();
        let n = elems.len();
        let index = |t: &[u64]| -> usize {
            let mut idx = 0usize;
            for (v, &f) in t.iter().zip(&self.factors) {
                idx = idx * f as usize + *v as usize;
            }
            idx
        };
        let mut table = vec![vec![0usize; n]; n];
        for (i, x) in elems.iter().enumerate() {
            for (j, y) in elems.iter().enumerate() {
                let sum: Vec<u64> = x
                    .iter()
                    .zip(y)
                    .zip(&self.factors)
                    .map(|((a, b), &f)| (a + b) % f)
                    .collect();
                table[i][j] = index(&sum);
            }
        }
        debug_assert!(elems.iter().enumerate().all(|(i, e)| index(e) == i));
        table
    }
}

/// Exact classical Davenport constant with an extremal zero-sum-free witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupDavenport {
    pub value: u64,
    pub extremal: Vec<Vec<u64>>,
}

/// D(G) by exhaustive search over zero-sum-free multisets, |G| <= 64.
pub fn davenport_group(spec: &GroupSpec) -> Result<GroupDavenport> {
    relative_davenport_impl(spec, &[]).map(|(value, extremal)| GroupDavenport { value, extremal })
}

/// Relative constant: least N such that every length-N sequence has a
/// nonempty subsequence summing into the subgroup generated by `h_gens`.
pub fn davenport_relative(spec: &GroupSpec, h_gens: &[Vec<u64>]) -> Result<u64> {
    relative_davenport_impl(spec, h_gens).map(|(value, _)| value)
}

struct SumFreeDfs<'a> {
    table: &'a [Vec<usize>],
    h_mask: u64,
    n: usize,
    best: usize,
    best_path: Vec<usize>,
    path: Vec<usize>,
}

impl SumFreeDfs<'_> {
    /// `sums` tracks all nonempty subset sums of the current path as a
    /// bitmask over element indices.
    fn run(&mut self, start: usize, sums: u64) {
        if self.path.len() > self.best {
            self.best = self.path.len();
            self.best_path = self.path.clone();
        }
        for g in start..self.n {
            let mut next = sums | (1u64 << g);
            let mut s = sums;
            while s != 0 {
                let i = s.trailing_zeros() as usize;
                s &= s - 1;
                next |= 1u64 << self.table[i][g];
            }
            if next & self.h_mask != 0 {
                continue;
            }
            self.path.push(g);
            self.run(g, next);
            self.path.pop();
        }
    }
}

fn relative_davenport_impl(spec: &GroupSpec, h_gens: &[Vec<u64>]) -> Result<(u64, Vec<Vec<u64>>)> {
    let order = spec.order();
    if order > MAX_GROUP_ORDER as u128 {
        return Err(Error::GroupOrderExceeded {
            order,
            max: MAX_GROUP_ORDER as u128,
        });
    }
    let elems = spec.elements();
    let n = elems.len();
    let table = spec.add_table();
    let index_of = |t: &[u64]| -> Result<usize> {
        elems
            .iter()
            .position(|e| e == t)
            .ok_or_else(|| Error::InvalidGroupSpec(format!("element {:?} has wrong shape", t)))
    };
    // subgroup closure as a bitmask; always contains the identity
    let mut h_mask: u64 = 1;
    for g in h_gens {
        h_mask |= 1u64 << index_of(g)?;
    }
    loop {
        let mut grew = false;
        for (i, row) in table.iter().enumerate() {
            if h_mask & (1u64 << i) == 0 {
                continue;
            }
            for (j, &s) in row.iter().enumerate().take(i + 1) {
                if h_mask & (1u64 << j) == 0 {
                    continue;
                }
                if h_mask & (1u64 << s) == 0 {
                    h_mask |= 1u64 << s;
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }

    let mut dfs = SumFreeDfs {
        table: &table,
        h_mask,
        n,
        best: 0,
        best_path: Vec::new(),
        path: Vec::new(),
    };
    dfs.run(0, 0);
    let extremal = dfs.best_path.iter().map(|&i| elems[i].clone()).collect();
    Ok((dfs.best as u64 + 1, extremal))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::DEFAULT_CLASS_SEARCH_BUDGET;
    use crate::field::make_field;

    #[test]
    fn subproduct_scan_examples() {
        let f7 = make_field(-7).unwrap();
        let o5 = Order::new(f7.clone(), 5).unwrap();
        let w = f7.omega();
        let list = ProductList::repeated(&f7, &w, 5).unwrap();
        assert_eq!(find_order_subproduct(&list, &o5, true).unwrap(), None);

        let g = make_field(-1).unwrap();
        let o7 = Order::new(g.clone(), 7).unwrap();
        let list = ProductList::new(&g, vec![QuadInt::from_int(7), QuadInt::new(1, 2)]).unwrap();
        let w = find_order_subproduct(&list, &o7, true).unwrap().unwrap();
        assert_eq!(w.indices, vec![0]);
        assert_eq!(w.unit, QuadInt::one());

        let o5i = Order::new(g.clone(), 5).unwrap();
        let list = ProductList::repeated(&g, &QuadInt::new(2, 1), 2).unwrap();
        assert_eq!(find_order_subproduct(&list, &o5i, true).unwrap(), None);
    }

    #[test]
    fn scan_length_bound() {
        let g = make_field(-1).unwrap();
        let o = Order::new(g.clone(), 3).unwrap();
        let list = ProductList::repeated(&g, &QuadInt::new(1, 1), 26).unwrap();
        assert!(matches!(
            find_order_subproduct(&list, &o, true),
            Err(Error::LengthBoundExceeded { len: 26, max: 25 })
        ));
    }

    #[test]
    fn strict_vs_unit_scan() {
        // (2+3i)^10 lands in i*F_19, so the unit scan finds a subproduct of
        // (2+3i)^19 while the strict scan finds none.
        let g = make_field(-1).unwrap();
        let o19 = Order::new(g.clone(), 19).unwrap();
        let gamma = QuadInt::new(2, 3);
        let list = ProductList::repeated(&g, &gamma, 19).unwrap();
        assert_eq!(find_order_subproduct(&list, &o19, false).unwrap(), None);
        let hit = find_order_subproduct(&list, &o19, true).unwrap().unwrap();
        assert_eq!(hit.indices.len(), 10);
        let mut prod = hit.unit.clone();
        for &i in &hit.indices {
            prod = g.mul(&prod, &list.factors()[i]);
        }
        assert!(o19.contains(&prod));
    }

    #[test]
    fn proper_only_and_conductor_variants() {
        // the pair above a split 5 is a conductor product with no proper
        // conductor subproduct
        let g = make_field(-1).unwrap();
        let o5 = Order::new(g.clone(), 5).unwrap();
        let pair = ProductList::new(&g, vec![QuadInt::new(2, 1), QuadInt::new(2, -1)]).unwrap();
        let opts = ScanOptions {
            up_to_units: true,
            proper_only: false,
        };
        let full = find_conductor_subproduct(&pair, &o5, opts)
            .unwrap()
            .unwrap();
        assert_eq!(full.indices, vec![0, 1]);
        let proper = ScanOptions {
            up_to_units: true,
            proper_only: true,
        };
        assert_eq!(find_conductor_subproduct(&pair, &o5, proper).unwrap(), None);
        // any longer conductor product contains the pair as a proper
        // subproduct
        for extra in [QuadInt::new(2, 1), QuadInt::new(1, 1), QuadInt::from_int(3)] {
            let mut v = pair.factors().to_vec();
            v.push(extra);
            let list = ProductList::new(&g, v).unwrap();
            assert!(find_conductor_subproduct(&list, &o5, proper)
                .unwrap()
                .is_some());
        }
    }

    #[test]
    fn conductor_prime_irreducibility() {
        let f7 = make_field(-7).unwrap();
        let o5 = Order::new(f7.clone(), 5).unwrap();
        let w = f7.omega();
        let list = ProductList::repeated(&f7, &w, 5).unwrap();
        assert!(irreducible_with_conductor_prime(&QuadInt::from_int(5), &list, &o5).unwrap());

        let g = make_field(-1).unwrap();
        let o19 = Order::new(g.clone(), 19).unwrap();
        let list = ProductList::repeated(&g, &QuadInt::new(2, 3), 19).unwrap();
        assert!(!irreducible_with_conductor_prime(&QuadInt::from_int(19), &list, &o19).unwrap());

        // empty product list: the conductor prime itself is irreducible
        let empty = ProductList::new(&f7, vec![]).unwrap();
        assert!(irreducible_with_conductor_prime(&QuadInt::from_int(5), &empty, &o5).unwrap());

        // precondition violations
        assert!(irreducible_with_conductor_prime(&QuadInt::from_int(3), &empty, &o5).is_err());
        assert!(irreducible_with_conductor_prime(&QuadInt::from_int(10), &empty, &o5).is_err());
    }

    #[test]
    fn davenport_outcomes() {
        let f7 = make_field(-7).unwrap();
        let o5 = Order::new(f7.clone(), 5).unwrap();
        assert_eq!(
            davenport_of_order(&o5).unwrap(),
            DavenportOutcome::Finite(6)
        );

        let g = make_field(-1).unwrap();
        let o5i = Order::new(g.clone(), 5).unwrap();
        match davenport_of_order(&o5i).unwrap() {
            DavenportOutcome::Infinite(w) => {
                let (c, _) = g.canonical_associate(&QuadInt::new(2, 1)).unwrap();
                assert_eq!(w.prime, c);
                assert_eq!(w.verified_lengths, 10);
            }
            other => panic!("expected infinite, got {:?}", other),
        }

        let o4 = Order::new(g.clone(), 4).unwrap();
        assert_eq!(davenport_of_order(&o4), Err(Error::CompositeConductor(4)));

        let o3i = Order::new(g.clone(), 3).unwrap();
        assert!(matches!(
            davenport_of_order(&o3i).unwrap(),
            DavenportOutcome::Unsupported(_)
        ));
        let o7ram = Order::new(f7, 7).unwrap();
        assert!(matches!(
            davenport_of_order(&o7ram).unwrap(),
            DavenportOutcome::Unsupported(_)
        ));
    }

    #[test]
    fn certificate_d_minus_7_f_5() {
        let f7 = make_field(-7).unwrap();
        let o5 = Order::new(f7.clone(), 5).unwrap();
        let cert = davenport_certificate(&o5, DEFAULT_CLASS_SEARCH_BUDGET).unwrap();
        assert_eq!(cert.generator, f7.omega());
        assert_eq!(cert.lower.len(), 5);
        assert_eq!(cert.upper, UpperCheck::Verified { multisets: 462 });
    }

    #[test]
    fn certificate_inert_prime_for_d_minus_11() {
        let h = make_field(-11).unwrap();
        // smallest inert odd prime, found by the splitting oracle
        let p = (3u64..)
            .filter(|&q| crate::intfactor::is_prime_u64(q))
            .find(|&q| splitting_tag(q, &h) == SplitTag::Inert)
            .unwrap();
        assert_eq!(p, 7);
        let o = Order::new(h, p).unwrap();
        let cert = davenport_certificate(&o, DEFAULT_CLASS_SEARCH_BUDGET).unwrap();
        assert_eq!(cert.lower.len(), 7);
        assert_eq!(cert.upper, UpperCheck::Verified { multisets: 6435 });
        assert_eq!(davenport_of_order(&o).unwrap(), DavenportOutcome::Finite(8));
    }

    #[test]
    fn certificate_refuses_large_upper_check() {
        let f7 = make_field(-7).unwrap();
        let o13 = Order::new(f7, 13).unwrap();
        let cert = davenport_certificate(&o13, DEFAULT_CLASS_SEARCH_BUDGET).unwrap();
        assert_eq!(cert.lower.len(), 13);
        assert_eq!(cert.upper, UpperCheck::Refused { p: 13 });
    }

    #[test]
    fn group_oracle_values() {
        let d6 = davenport_group(&GroupSpec::cyclic(6)).unwrap();
        assert_eq!(d6.value, 6);
        assert_eq!(d6.extremal, vec![vec![1]; 5]);

        let trivial = davenport_group(&GroupSpec::new(vec![]).unwrap()).unwrap();
        assert_eq!(trivial.value, 1);
        assert!(trivial.extremal.is_empty());
        assert_eq!(
            davenport_group(&GroupSpec::new(vec![1]).unwrap())
                .unwrap()
                .value,
            1
        );

        let z2z4 = davenport_group(&GroupSpec::new(vec![2, 4]).unwrap()).unwrap();
        assert_eq!(z2z4.value, 5);

        let too_big = GroupSpec::cyclic(65);
        assert!(matches!(
            davenport_group(&too_big),
            Err(Error::GroupOrderExceeded { .. })
        ));
        assert!(GroupSpec::new(vec![2, 3]).is_err());
        assert!(GroupSpec::new(vec![0]).is_err());
    }

    #[test]
    fn relative_symmetry_small() {
        // D_H(G) = D(G/H) for cyclic G of order 12 and every subgroup
        let n = 12u64;
        let spec = GroupSpec::cyclic(n);
        for m in [1u64, 2, 3, 4, 6, 12] {
            let h_gen = vec![vec![m % n]];
            let lhs = davenport_relative(&spec, &h_gen).unwrap();
            let rhs = davenport_group(&GroupSpec::cyclic(m)).unwrap().value;
            assert_eq!(lhs, rhs, "m = {}", m);
        }
    }

    #[test]
    fn monotonicity_of_witnesses() {
        // appending factors never turns an existing witness into none
        let g = make_field(-1).unwrap();
        let o3 = Order::new(g.clone(), 3).unwrap();
        let base = vec![
            QuadInt::new(1, 1),
            QuadInt::new(1, -1),
            QuadInt::from_int(7),
        ];
        let list = ProductList::new(&g, base.clone()).unwrap();
        assert!(find_order_subproduct(&list, &o3, true).unwrap().is_some());
        for extra in [QuadInt::new(1, 2), QuadInt::new(2, 3), QuadInt::from_int(3)] {
            let mut v = base.clone();
            v.push(extra);
            let bigger = ProductList::new(&g, v).unwrap();
            assert!(find_order_subproduct(&bigger, &o3, true).unwrap().is_some());
        }
    }
}
