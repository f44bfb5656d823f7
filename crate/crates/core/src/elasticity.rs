//! Irreducibility in orders, exhaustive enumeration of irreducible
//! factorizations, element and order elasticity, and the witness
//! constructions attaining the closed-form values.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
pub use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::factorization::{factor_element, splitting_tag, splitting_type, SplitTag};
use crate::field::FieldContext;
use crate::modring::{ModRing, Pair};
use crate::orders::Order;
use crate::quadint::QuadInt;
use crate::residue::{
    coset_order, find_generator_prime, ResidueField, SubgroupMode, UnitCorrectedSubgroup,
};

/// Divisor-enumeration bound for the irreducibility test.
pub const MAX_IRREDUCIBILITY_PRIMES: usize = 20;

/// Partition-enumeration bound for factorization length sets.
pub const MAX_ENUMERATION_PRIMES: usize = 12;

/// Multiset of canonical primes of an element, with order-membership and
/// block-irreducibility masks over sub-multisets. Sub-multisets are indexed
/// in mixed radix over the exponent vector; membership of a block only
/// depends on its residue mod f, so the tables are small and exact.
struct BlockTables {
    primes: Vec<QuadInt>,
    exps: Vec<u32>,
    strides: Vec<usize>,
    full: usize,
    units: Vec<QuadInt>,
    u_one: usize,
    unit_inv: Vec<usize>,
    /// mask_mul[m1][m2]: units reachable as v1*v2 with v1 in m1, v2 in m2
    mask_mul: Vec<Vec<u8>>,
    /// mem[s]: units u with u * prod(s) in the order
    mem: Vec<u8>,
    /// irr[s]: units u with u * prod(s) in the order and irreducible there
    irr: Vec<u8>,
}

impl BlockTables {
    fn new(
        order: &Order,
        primes: Vec<QuadInt>,
        exps: Vec<u32>,
        with_irr: bool,
    ) -> Result<BlockTables> {
        let ctx = order.ctx();
        let ring = ModRing::new(ctx, order.conductor());
        let units: Vec<QuadInt> = ctx.units().to_vec();
        let nu = units.len();
        let u_one = units
            .iter()
            .position(|u| *u == QuadInt::one())
            .expect("unit list contains 1");

        let mut unit_mul = vec![vec![0usize; nu]; nu];
        for i in 0..nu {
            for j in 0..nu {
                let p = ctx.mul(&units[i], &units[j]);
                unit_mul[i][j] = units
                    .iter()
                    .position(|u| *u == p)
                    .expect("units are closed");
            }
        }
        let unit_inv: Vec<usize> = (0..nu)
            .map(|i| {
                (0..nu)
                    .find(|&j| unit_mul[i][j] == u_one)
                    .expect("units invert")
            })
            .collect();
        let mut mask_mul = vec![vec![0u8; 1 << nu]; 1 << nu];
        for (m1, mrow) in mask_mul.iter_mut().enumerate() {
            for (m2, cell) in mrow.iter_mut().enumerate() {
                let mut out = 0u8;
                for (i, row) in unit_mul.iter().enumerate() {
                    if m1 & (1 << i) == 0 {
                        continue;
                    }
                    for (j, &k) in row.iter().enumerate() {
                        if m2 & (1 << j) != 0 {
                            out |= 1 << k;
                        }
                    }
                }
                *cell = out;
            }
        }

        let mut strides = Vec::with_capacity(exps.len());
        let mut total = 1usize;
        for &e in &exps {
            strides.push(total);
            total *= e as usize + 1;
        }
        let full = total - 1;

        // residues of all sub-multiset products, built incrementally
        let prime_res: Vec<Pair> = primes.iter().map(|p| ring.reduce(p)).collect();
        let mut res: Vec<Pair> = vec![ring.one(); total];
        for s in 1..total {
            let i = (0..exps.len())
                .find(|&i| (s / strides[i]) % (exps[i] as usize + 1) > 0)
                .expect("nonzero index has a nonzero digit");
            res[s] = ring.mul(res[s - strides[i]], prime_res[i]);
        }
        let unit_res: Vec<Pair> = units.iter().map(|u| ring.reduce(u)).collect();
        let mem: Vec<u8> = res
            .iter()
            .map(|&r| {
                let mut m = 0u8;
                for (ui, &ur) in unit_res.iter().enumerate() {
                    if ring.in_order(ring.mul(ur, r)) {
                        m |= 1 << ui;
                    }
                }
                m
            })
            .collect();

        let irr = if with_irr {
            // reducible-unit masks via all proper nonempty splits
            let mut red = vec![0u8; total];
            for s in 1..total {
                let mut sub = init_sub(&exps);
                loop {
                    let t = sub_index(&sub, &strides);
                    if t != 0 && t != s {
                        red[s] |= mask_mul[mem[t] as usize][mem[s - t] as usize];
                    }
                    if !next_sub(&mut sub, s, &strides, &exps) {
                        break;
                    }
                }
            }
            (0..total).map(|s| mem[s] & !red[s]).collect()
        } else {
            Vec::new()
        };

        Ok(BlockTables {
            primes,
            exps,
            strides,
            full,
            units,
            u_one,
            unit_inv,
            mask_mul,
            mem,
            irr,
        })
    }

    fn from_element(
        x: &QuadInt,
        order: &Order,
        max_primes: usize,
        with_irr: bool,
    ) -> Result<(BlockTables, usize)> {
        let ctx = order.ctx();
        let fx = factor_element(x, ctx)?;
        let count = fx.count();
        if count > max_primes {
            return Err(Error::FactorCountExceeded {
                count,
                max: max_primes,
            });
        }
        let (primes, exps): (Vec<QuadInt>, Vec<u32>) = fx.factors.iter().cloned().unzip();
        let tables = BlockTables::new(order, primes, exps, with_irr)?;
        let u0 = tables
            .units
            .iter()
            .position(|u| *u == fx.unit)
            .ok_or_else(|| Error::Internal("factorization unit is not a unit".into()))?;
        Ok((tables, u0))
    }

    fn digit(&self, s: usize, i: usize) -> usize {
        (s / self.strides[i]) % (self.exps[i] as usize + 1)
    }

    /// Exact value of unit * prod(block s) in Z[w].
    fn block_value(&self, ctx: &FieldContext, unit: usize, s: usize) -> QuadInt {
        let mut acc = self.units[unit].clone();
        for i in 0..self.exps.len() {
            for _ in 0..self.digit(s, i) {
                acc = ctx.mul(&acc, &self.primes[i]);
            }
        }
        acc
    }
}

fn init_sub(exps: &[u32]) -> Vec<usize> {
    vec![0; exps.len()]
}

fn sub_index(sub: &[usize], strides: &[usize]) -> usize {
    sub.iter().zip(strides).map(|(c, st)| c * st).sum()
}

/// Odometer over componentwise sub-multisets of s. Returns false after the
/// last one.
fn next_sub(sub: &mut [usize], s: usize, strides: &[usize], exps: &[u32]) -> bool {
    for i in 0..sub.len() {
        let cap = (s / strides[i]) % (exps[i] as usize + 1);
        if sub[i] < cap {
            sub[i] += 1;
            for x in sub.iter_mut().take(i) {
                *x = 0;
            }
            return true;
        }
    }
    false
}

fn check_enumeration_input(x: &QuadInt, order: &Order) -> Result<()> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    if order.ctx().is_unit(x) {
        return Err(Error::UnitElement);
    }
    if !order.contains(x) {
        return Err(Error::NotInOrder(order.conductor()));
    }
    Ok(())
}

/// Whether x is irreducible in the order: no decomposition x = y*z with both
/// cofactors nonunits of the order. Decided by enumerating unit multiples of
/// sub-multisets of the prime factorization of x.
pub fn is_irreducible_in_order(x: &QuadInt, order: &Order) -> Result<bool> {
    check_enumeration_input(x, order)?;
    let (t, u0) = BlockTables::from_element(x, order, MAX_IRREDUCIBILITY_PRIMES, false)?;
    for s in 1..t.full {
        let m = t.mask_mul[t.mem[s] as usize][t.mem[t.full - s] as usize];
        if m & (1 << u0) != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The achieved factorization lengths of an element in an order, with one
/// stored sample factorization per achieved length.
#[derive(Clone, Debug)]
pub struct FactorizationEnumeration {
    pub element: QuadInt,
    pub lengths: BTreeSet<usize>,
    pub samples: BTreeMap<usize, Vec<QuadInt>>,
}

impl FactorizationEnumeration {
    pub fn min_length(&self) -> usize {
        *self.lengths.first().expect("nonunit elements factor")
    }

    pub fn max_length(&self) -> usize {
        *self.lengths.last().expect("nonunit elements factor")
    }

    /// Re-verify the stored samples: exact products and irreducible factors.
    pub fn verify(&self, order: &Order) -> Result<()> {
        for (len, factors) in &self.samples {
            if factors.len() != *len {
                return Err(Error::Internal("sample length mismatch".into()));
            }
            let mut prod = QuadInt::one();
            for f in factors {
                if !is_irreducible_in_order(f, order)? {
                    return Err(Error::Internal(format!("{} is not irreducible", f)));
                }
                prod = order.ctx().mul(&prod, f);
            }
            if prod != self.element {
                return Err(Error::Internal("sample does not multiply back".into()));
            }
        }
        Ok(())
    }
}

/// Complete set of irreducible-factorization lengths by multiset-partition
/// enumeration: blocks are canonicalized by the smallest contained prime,
/// and a unit assignment with the right global product is resolved per
/// partition from the per-block feasible-unit sets.
pub fn factorization_lengths(x: &QuadInt, order: &Order) -> Result<FactorizationEnumeration> {
    check_enumeration_input(x, order)?;
    let (t, u0) = BlockTables::from_element(x, order, MAX_ENUMERATION_PRIMES, true)?;
    let ctx = order.ctx();

    let mut lengths: BTreeSet<usize> = BTreeSet::new();
    let mut samples: BTreeMap<usize, Vec<QuadInt>> = BTreeMap::new();

    // depth-first over partitions; blocks carry their feasible-unit masks
    fn descend(
        t: &BlockTables,
        ctx: &FieldContext,
        u0: usize,
        remaining: usize,
        blocks: &mut Vec<usize>,
        lengths: &mut BTreeSet<usize>,
        samples: &mut BTreeMap<usize, Vec<QuadInt>>,
    ) {
        if remaining == 0 {
            let k = blocks.len();
            if lengths.contains(&k) {
                return;
            }
            // reachability of the global unit through the feasible sets
            let mut reach: Vec<u8> = Vec::with_capacity(k + 1);
            reach.push(1 << t.u_one);
            for &b in blocks.iter() {
                let prev = *reach.last().expect("nonempty") as usize;
                reach.push(t.mask_mul[prev][t.irr[b] as usize]);
            }
            if reach[k] & (1 << u0) == 0 {
                return;
            }
            // reconstruct one unit assignment right to left
            let mut assignment = vec![0usize; k];
            let mut target = u0;
            for j in (0..k).rev() {
                let b = blocks[j];
                let mut found = false;
                for v in 0..t.units.len() {
                    if t.irr[b] & (1 << v) == 0 {
                        continue;
                    }
                    let prev_needed = (0..t.units.len()).find(|&r| {
                        reach[j] & (1 << r) != 0 && t.mask_mul[1 << r][1 << v] & (1 << target) != 0
                    });
                    if let Some(r) = prev_needed {
                        assignment[j] = v;
                        target = r;
                        found = true;
                        break;
                    }
                }
                debug_assert!(found, "reachable target must decompose");
            }
            let factors: Vec<QuadInt> = blocks
                .iter()
                .zip(&assignment)
                .map(|(&b, &v)| t.block_value(ctx, v, b))
                .collect();
            lengths.insert(k);
            samples.insert(k, factors);
            return;
        }
        let pivot = (0..t.exps.len())
            .find(|&i| t.digit(remaining, i) > 0)
            .expect("nonzero remainder has a digit");
        // enumerate blocks containing the pivot prime
        let mut sub: Vec<usize> = vec![0; t.exps.len()];
        sub[pivot] = 1;
        loop {
            let b = sub_index(&sub, &t.strides);
            if t.irr[b] != 0 {
                blocks.push(b);
                descend(t, ctx, u0, remaining - b, blocks, lengths, samples);
                blocks.pop();
            }
            if !next_sub_with_floor(&mut sub, remaining, pivot, t) {
                break;
            }
        }
    }

    // odometer over sub-multisets of `remaining` whose pivot digit stays >= 1
    fn next_sub_with_floor(sub: &mut [usize], s: usize, pivot: usize, t: &BlockTables) -> bool {
        for i in 0..sub.len() {
            if sub[i] < t.digit(s, i) {
                sub[i] += 1;
                for (j, x) in sub.iter_mut().enumerate().take(i) {
                    *x = if j == pivot { 1 } else { 0 };
                }
                return true;
            }
        }
        false
    }

    let mut blocks = Vec::new();
    descend(&t, ctx, u0, t.full, &mut blocks, &mut lengths, &mut samples);
    if lengths.is_empty() {
        return Err(Error::Internal(
            "a nonunit element of the order admitted no factorization".into(),
        ));
    }
    Ok(FactorizationEnumeration {
        element: x.clone(),
        lengths,
        samples,
    })
}

/// Independent length enumerator: recursively peel one irreducible divisor,
/// memoized on (remaining sub-multiset, accumulated unit).
pub fn lengths_by_peeling(x: &QuadInt, order: &Order) -> Result<BTreeSet<usize>> {
    check_enumeration_input(x, order)?;
    let (t, u0) = BlockTables::from_element(x, order, MAX_ENUMERATION_PRIMES, true)?;

    fn peel(
        t: &BlockTables,
        remaining: usize,
        w: usize,
        memo: &mut HashMap<(usize, usize), BTreeSet<usize>>,
    ) -> BTreeSet<usize> {
        if remaining == 0 {
            let mut out = BTreeSet::new();
            if w == t.u_one {
                out.insert(0);
            }
            return out;
        }
        if let Some(hit) = memo.get(&(remaining, w)) {
            return hit.clone();
        }
        let mut out = BTreeSet::new();
        let pivot = (0..t.exps.len())
            .find(|&i| t.digit(remaining, i) > 0)
            .expect("nonzero remainder has a digit");
        let mut sub: Vec<usize> = vec![0; t.exps.len()];
        sub[pivot] = 1;
        loop {
            let b: usize = sub.iter().zip(&t.strides).map(|(c, st)| c * st).sum();
            for v in 0..t.units.len() {
                if t.irr[b] & (1 << v) == 0 {
                    continue;
                }
                // x = (v * B) * rest, so rest carries unit w * v^-1
                let w_next = {
                    let m = t.mask_mul[1 << w][1 << t.unit_inv[v]];
                    m.trailing_zeros() as usize
                };
                for l in peel(t, remaining - b, w_next, memo) {
                    out.insert(l + 1);
                }
            }
            // advance odometer keeping the pivot digit >= 1
            let mut advanced = false;
            for i in 0..sub.len() {
                let cap = t.digit(remaining, i);
                if sub[i] < cap {
                    sub[i] += 1;
                    for (j, xx) in sub.iter_mut().enumerate().take(i) {
                        *xx = if j == pivot { 1 } else { 0 };
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
        memo.insert((remaining, w), out.clone());
        out
    }

    let mut memo = HashMap::new();
    Ok(peel(&t, t.full, u0, &mut memo))
}

/// Exact elasticity of an element with witness factorizations of extreme
/// lengths.
#[derive(Clone, Debug)]
pub struct ElementElasticity {
    pub value: Ratio<u64>,
    pub shortest: Vec<QuadInt>,
    pub longest: Vec<QuadInt>,
    pub enumeration: FactorizationEnumeration,
}

pub fn elasticity_of_element(x: &QuadInt, order: &Order) -> Result<ElementElasticity> {
    let e = factorization_lengths(x, order)?;
    let (mn, mx) = (e.min_length(), e.max_length());
    Ok(ElementElasticity {
        value: Ratio::new(mx as u64, mn as u64),
        shortest: e.samples[&mn].clone(),
        longest: e.samples[&mx].clone(),
        enumeration: e,
    })
}

/// One member of the infinite-elasticity family over a split conductor:
/// f^(n+2) with its two verified factorizations of lengths 2 and n+2.
#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub n: usize,
    pub element: QuadInt,
    pub short: Vec<QuadInt>,
    pub long: Vec<QuadInt>,
}

#[derive(Clone, Debug)]
pub struct SplitElasticityFamily {
    pub split_prime: QuadInt,
    pub instances: Vec<FamilyInstance>,
}

/// Finite order elasticity: the closed-form value together with a witness
/// element and its two extreme factorizations. When the witness stays within
/// the enumeration bound, `enumeration` holds the full length set and the
/// equality with the formula has been checked; otherwise the two recorded
/// factorizations are lower-bound evidence.
#[derive(Clone, Debug)]
pub struct FiniteOrderElasticity {
    pub value: Ratio<u64>,
    pub witness: QuadInt,
    pub short: Vec<QuadInt>,
    pub long: Vec<QuadInt>,
    pub enumeration: Option<FactorizationEnumeration>,
}

#[derive(Clone, Debug)]
pub enum OrderElasticity {
    Finite(FiniteOrderElasticity),
    Infinite(SplitElasticityFamily),
    Unsupported(String),
}

impl OrderElasticity {
    pub fn value_string(&self) -> String {
        match self {
            OrderElasticity::Finite(f) => format!("{}/{}", f.value.numer(), f.value.denom()),
            OrderElasticity::Infinite(_) => "inf".into(),
            OrderElasticity::Unsupported(r) => format!("unsupported: {}", r),
        }
    }
}

/// How many family members the split (infinite) case verifies.
pub const SPLIT_FAMILY_LENGTHS: usize = 6;

/// Elasticity of Z[p*w] for a rational prime conductor p:
/// 1 + p/2 for inert p and d < -3, (p+3)/4 for d = -1 with inert p,
/// infinite for split p, unsupported otherwise.
pub fn order_elasticity(order: &Order, budget: usize) -> Result<OrderElasticity> {
    let ctx = order.ctx();
    if !ctx.is_ufd() {
        return Err(Error::NonUfdContext(ctx.d()));
    }
    let p = order.conductor();
    if !crate::intfactor::is_prime_u64(p) {
        return Err(Error::CompositeConductor(p));
    }
    match splitting_tag(p, ctx) {
        SplitTag::Split => split_family(order, p).map(OrderElasticity::Infinite),
        SplitTag::Ramified => Ok(OrderElasticity::Unsupported(format!(
            "conductor {} ramifies in d = {}",
            p,
            ctx.d()
        ))),
        SplitTag::Inert => {
            if p == 2 {
                return Ok(OrderElasticity::Unsupported(
                    "p = 2 is outside the residue machinery".into(),
                ));
            }
            if ctx.d() < -3 {
                inert_witness(order, p, p as usize, Ratio::new(p + 2, 2), budget)
                    .map(OrderElasticity::Finite)
            } else if ctx.d() == -1 {
                let m = ((p - 1) / 2) as usize;
                inert_witness(order, p, m, Ratio::new(p + 3, 4), budget)
                    .map(OrderElasticity::Finite)
            } else {
                Ok(OrderElasticity::Unsupported(format!(
                    "no formula in scope for inert conductors with d = {}",
                    ctx.d()
                )))
            }
        }
    }
}

/// The split-conductor family: f^(n+2) = (f * pi^n) * (f * conj(pi)^n) and
/// f * f * (pi*conj(pi))^n give factorizations of lengths 2 and n + 2.
fn split_family(order: &Order, p: u64) -> Result<SplitElasticityFamily> {
    let ctx = order.ctx();
    let st = splitting_type(p, ctx)?;
    let pi = st.witness;
    let pibar = ctx.conj(&pi);
    let pq = QuadInt::from_int(p);
    let mut instances = Vec::new();
    for n in 1..=SPLIT_FAMILY_LENGTHS {
        let a = ctx.mul(&pq, &ctx.pow(&pi, n as u32));
        let b = ctx.mul(&pq, &ctx.pow(&pibar, n as u32));
        let element = ctx.mul(&a, &b);
        // sanity: the element is the rational power p^(n+2)
        let expect = BigInt::from(p).pow(n as u32 + 2);
        if element != QuadInt::new(expect.clone(), BigInt::from(0)) {
            return Err(Error::Internal(
                "split family element is not a conductor power".into(),
            ));
        }
        let short = vec![a, b];
        let long = vec![pq.clone(); n + 2];
        for f in short.iter().chain(&long) {
            if !order.contains(f) || !is_irreducible_in_order(f, order)? {
                return Err(Error::Internal(format!(
                    "family factor {} is not irreducible in the order",
                    f
                )));
            }
        }
        let mut prod = QuadInt::one();
        for f in &long {
            prod = ctx.mul(&prod, f);
        }
        if prod != element {
            return Err(Error::Internal(
                "long factorization does not multiply back".into(),
            ));
        }
        instances.push(FamilyInstance {
            n,
            element,
            short,
            long,
        });
    }
    Ok(SplitElasticityFamily {
        split_prime: pi,
        instances,
    })
}

/// Witness p^2 * gamma^m * conj(gamma)^m for a generator prime gamma of the
/// appropriate quotient: m = p for d < -3, m = (p-1)/2 for d = -1.
fn inert_witness(
    order: &Order,
    p: u64,
    m: usize,
    value: Ratio<u64>,
    budget: usize,
) -> Result<FiniteOrderElasticity> {
    let ctx = order.ctx();
    let fld = ResidueField::new(ctx, p)?;
    let mode = if ctx.d() == -1 {
        SubgroupMode::BaseFieldWithUnits
    } else {
        SubgroupMode::BaseField
    };
    let subgroup = UnitCorrectedSubgroup::new(&fld, ctx, mode)?;
    let gamma = find_generator_prime(ctx, p, &subgroup, budget)?;

    // the generator's coset order exceeds m, so no power of gamma up to m
    // multiplies into the order even up to units; with p in the conductor
    // that makes p * gamma^m irreducible
    let ord = coset_order(&fld, fld.reduce(&gamma), &subgroup)?;
    if ord != subgroup.quotient_order() || ord <= m as u64 {
        return Err(Error::Internal(
            "generator prime has the wrong coset order".into(),
        ));
    }

    let pq = QuadInt::from_int(p);
    let gbar = ctx.conj(&gamma);
    let a = ctx.mul(&pq, &ctx.pow(&gamma, m as u32));
    let b = ctx.mul(&pq, &ctx.pow(&gbar, m as u32));
    let witness = ctx.mul(&a, &b);
    let q = ctx.mul(&gamma, &gbar); // the rational prime N(gamma)
    let mut long = vec![pq.clone(), pq.clone()];
    long.extend(std::iter::repeat_n(q, m));

    let short = vec![a, b];
    for f in &short {
        if !order.contains(f) {
            return Err(Error::Internal("short factor left the order".into()));
        }
        let count = 1 + m;
        if count <= MAX_IRREDUCIBILITY_PRIMES && !is_irreducible_in_order(f, order)? {
            return Err(Error::Internal(format!("short factor {} is reducible", f)));
        }
    }
    for f in &long {
        if !order.contains(f) || !is_irreducible_in_order(f, order)? {
            return Err(Error::Internal(format!("long factor {} is reducible", f)));
        }
    }
    let mut prod = QuadInt::one();
    for f in &long {
        prod = ctx.mul(&prod, f);
    }
    if prod != witness {
        return Err(Error::Internal(
            "long factorization does not multiply back".into(),
        ));
    }
    let lengths_ratio = Ratio::new((m + 2) as u64, 2);
    if lengths_ratio != value {
        return Err(Error::Internal(
            "witness lengths disagree with the formula".into(),
        ));
    }

    let enumeration = if 2 + 2 * m <= MAX_ENUMERATION_PRIMES {
        let e = elasticity_of_element(&witness, order)?;
        if e.value != value {
            return Err(Error::Internal(format!(
                "enumerated elasticity {} disagrees with the formula {}",
                e.value, value
            )));
        }
        Some(e.enumeration)
    } else {
        None
    };

    Ok(FiniteOrderElasticity {
        value,
        witness,
        short,
        long,
        enumeration,
    })
}

/// Element attaining the order elasticity.
pub fn max_elasticity_witness(order: &Order, budget: usize) -> Result<QuadInt> {
    match order_elasticity(order, budget)? {
        OrderElasticity::Finite(f) => Ok(f.witness),
        OrderElasticity::Infinite(_) => Err(Error::UnsupportedParameters(
            "the order has infinite elasticity; no single witness attains it".into(),
        )),
        OrderElasticity::Unsupported(r) => Err(Error::UnsupportedParameters(r)),
    }
}

/// Coprime-to-p primes of x that lie in the order (up to a unit of Z[w]);
/// each appears, up to a unit of the order, as an exact factor in every
/// stored sample factorization.
pub fn forced_factor_check(x: &QuadInt, order: &Order) -> Result<Vec<QuadInt>> {
    let ctx = order.ctx();
    let p = order.conductor();
    if !crate::intfactor::is_prime_u64(p) {
        return Err(Error::CompositeConductor(p));
    }
    if !order.contains(x) {
        return Err(Error::NotInOrder(p));
    }
    let fx = factor_element(x, ctx)?;
    let pb = BigInt::from(p);
    // split off the p-part and require the stated shape
    let mut coprime: Vec<(QuadInt, u32)> = Vec::new();
    let mut above_p: Vec<(QuadInt, u32)> = Vec::new();
    for (q, e) in &fx.factors {
        let nq = ctx.norm(q);
        if (&nq % &pb) == BigInt::from(0) {
            above_p.push((q.clone(), *e));
        } else {
            coprime.push((q.clone(), *e));
        }
    }
    match splitting_tag(p, ctx) {
        SplitTag::Inert => {}
        SplitTag::Split => {
            if above_p.len() == 2 && above_p[0].1 != above_p[1].1 {
                return Err(Error::Precondition(
                    "the p-part is not a power of p (unbalanced split exponents)".into(),
                ));
            }
            if above_p.len() == 1 {
                return Err(Error::Precondition(
                    "the p-part is not a power of p (one split prime missing)".into(),
                ));
            }
        }
        SplitTag::Ramified => {
            if above_p.first().is_some_and(|(_, e)| e % 2 != 0) {
                return Err(Error::Precondition(
                    "the p-part is not a power of p (odd ramified exponent)".into(),
                ));
            }
        }
    }

    let mut forced: Vec<QuadInt> = Vec::new();
    let mut forced_counts: Vec<(QuadInt, u32)> = Vec::new();
    for (q, e) in &coprime {
        for u in ctx.units() {
            let cand = ctx.mul(u, q);
            if order.contains(&cand) {
                forced.push(cand.clone());
                forced_counts.push((q.clone(), *e));
                break;
            }
        }
    }

    // verification through the enumeration samples
    if !forced.is_empty() {
        let e = factorization_lengths(x, order)?;
        for (canon, mult) in &forced_counts {
            for (len, factors) in &e.samples {
                let hits = factors
                    .iter()
                    .filter(|f| {
                        ctx.canonical_associate(f)
                            .map(|(c, _)| c == *canon)
                            .unwrap_or(false)
                    })
                    .count() as u32;
                if hits != *mult {
                    return Err(Error::Internal(format!(
                        "forced factor {} appears {} times in the length-{} sample, expected {}",
                        canon, hits, len, mult
                    )));
                }
            }
        }
    }
    Ok(forced)
}

/// Report of the exhaustive elasticity upper-bound scan.
#[derive(Clone, Debug)]
pub struct ScanReport {
    pub max_elasticity: Ratio<u64>,
    pub multisets_scanned: u64,
    pub elements_checked: u64,
    pub prime_pool: usize,
    pub distinct_signatures: usize,
}

/// Scan all elements of the order that are products of at most `max_primes`
/// primes of Z[w] of norm at most `norm_bound` (times a unit), and return
/// the largest element elasticity found.
///
/// Length sets only depend on the residues of the primes mod p, so the
/// expensive enumeration is memoized on the multiset of residue classes.
pub fn elasticity_bound_scan(
    order: &Order,
    max_primes: usize,
    norm_bound: u64,
) -> Result<ScanReport> {
    let ctx = order.ctx();
    if !ctx.is_ufd() {
        return Err(Error::NonUfdContext(ctx.d()));
    }
    let p = order.conductor();
    if !crate::intfactor::is_prime_u64(p) {
        return Err(Error::CompositeConductor(p));
    }
    if splitting_tag(p, ctx) != SplitTag::Inert {
        return Err(Error::UnsupportedParameters(
            "the bound scan needs an inert prime conductor".into(),
        ));
    }

    // canonical primes of norm <= bound
    let mut pool: Vec<QuadInt> = Vec::new();
    for q in 2..=norm_bound {
        if !crate::intfactor::is_prime_u64(q) {
            continue;
        }
        let st = splitting_type(q, ctx)?;
        match st.tag {
            SplitTag::Inert => {
                if q * q <= norm_bound {
                    pool.push(QuadInt::from_int(q));
                }
            }
            SplitTag::Ramified => pool.push(st.witness),
            SplitTag::Split => {
                let (c, _) = ctx.canonical_associate(&ctx.conj(&st.witness))?;
                pool.push(st.witness);
                pool.push(c);
            }
        }
    }

    let ring = ModRing::new(ctx, p);
    let mut class_of: Vec<usize> = Vec::new();
    let mut classes: Vec<Pair> = Vec::new();
    for prime in &pool {
        let r = ring.reduce(prime);
        let id = classes.iter().position(|&c| c == r).unwrap_or_else(|| {
            classes.push(r);
            classes.len() - 1
        });
        class_of.push(id);
    }

    let mut memo: HashMap<Vec<u8>, SignatureResult> = HashMap::new();
    let mut report = ScanReport {
        max_elasticity: Ratio::new(1, 1),
        multisets_scanned: 0,
        elements_checked: 0,
        prime_pool: pool.len(),
        distinct_signatures: 0,
    };
    let mut counts = vec![0u8; classes.len()];
    scan_multisets(
        order,
        &classes,
        &class_of,
        pool.len(),
        max_primes,
        0,
        &mut counts,
        &mut memo,
        &mut report,
    )?;
    report.distinct_signatures = memo.len();
    Ok(report)
}

/// Per residue-class signature: for every unit index, the extreme
/// factorization lengths of unit * prod, when that element lies in the order.
struct SignatureResult {
    per_unit: Vec<Option<(u32, u32)>>,
}

/// Memo cell of the min/max length solver: outer None means "not computed".
type LengthCell = Option<Option<(u32, u32)>>;

#[allow(clippy::too_many_arguments)]
fn scan_multisets(
    order: &Order,
    classes: &[Pair],
    class_of: &[usize],
    pool_len: usize,
    max_primes: usize,
    start: usize,
    counts: &mut Vec<u8>,
    memo: &mut HashMap<Vec<u8>, SignatureResult>,
    report: &mut ScanReport,
) -> Result<()> {
    if counts.iter().any(|&c| c > 0) {
        report.multisets_scanned += 1;
        let key = counts.clone();
        if !memo.contains_key(&key) {
            let result = evaluate_signature(order, classes, counts)?;
            memo.insert(key.clone(), result);
        }
        let result = &memo[&key];
        for lengths in result.per_unit.iter().flatten() {
            report.elements_checked += 1;
            let v = Ratio::new(lengths.1 as u64, lengths.0 as u64);
            if v > report.max_elasticity {
                report.max_elasticity = v;
            }
        }
    }
    if counts.iter().map(|&c| c as usize).sum::<usize>() == max_primes {
        return Ok(());
    }
    for i in start..pool_len {
        counts[class_of[i]] += 1;
        scan_multisets(
            order, classes, class_of, pool_len, max_primes, i, counts, memo, report,
        )?;
        counts[class_of[i]] -= 1;
    }
    Ok(())
}

/// Min/max factorization lengths for one residue-class multiset, for every
/// feasible global unit.
fn evaluate_signature(order: &Order, classes: &[Pair], counts: &[u8]) -> Result<SignatureResult> {
    let ctx = order.ctx();
    let ring = ModRing::new(ctx, order.conductor());
    let units: Vec<QuadInt> = ctx.units().to_vec();
    let nu = units.len();
    let unit_res: Vec<Pair> = units.iter().map(|u| ring.reduce(u)).collect();
    let mut unit_mul = vec![vec![0usize; nu]; nu];
    for i in 0..nu {
        for j in 0..nu {
            let p = ctx.mul(&units[i], &units[j]);
            unit_mul[i][j] = units.iter().position(|u| *u == p).expect("units closed");
        }
    }
    let u_one = units
        .iter()
        .position(|u| *u == QuadInt::one())
        .expect("has 1");
    let unit_inv: Vec<usize> = (0..nu)
        .map(|i| {
            (0..nu)
                .find(|&j| unit_mul[i][j] == u_one)
                .expect("units invert")
        })
        .collect();

    let active: Vec<usize> = (0..classes.len()).filter(|&i| counts[i] > 0).collect();
    let exps: Vec<usize> = active.iter().map(|&i| counts[i] as usize).collect();
    let mut strides = Vec::with_capacity(active.len());
    let mut total = 1usize;
    for &e in &exps {
        strides.push(total);
        total *= e + 1;
    }
    let full = total - 1;

    let mut res: Vec<Pair> = vec![ring.one(); total];
    for s in 1..total {
        let i = (0..active.len())
            .find(|&i| (s / strides[i]) % (exps[i] + 1) > 0)
            .expect("nonzero index has a digit");
        res[s] = ring.mul(res[s - strides[i]], classes[active[i]]);
    }
    let mem: Vec<u8> = res
        .iter()
        .map(|&r| {
            let mut m = 0u8;
            for (ui, &ur) in unit_res.iter().enumerate() {
                if ring.in_order(ring.mul(ur, r)) {
                    m |= 1 << ui;
                }
            }
            m
        })
        .collect();
    // mask products table
    let mut mask_mul = vec![vec![0u8; 1 << nu]; 1 << nu];
    for (m1, mrow) in mask_mul.iter_mut().enumerate() {
        for (m2, cell) in mrow.iter_mut().enumerate() {
            let mut out = 0u8;
            for (i, row) in unit_mul.iter().enumerate() {
                if m1 & (1 << i) == 0 {
                    continue;
                }
                for (j, &k) in row.iter().enumerate() {
                    if m2 & (1 << j) != 0 {
                        out |= 1 << k;
                    }
                }
            }
            *cell = out;
        }
    }
    let digit = |s: usize, i: usize| (s / strides[i]) % (exps[i] + 1);
    let mut red = vec![0u8; total];
    for s in 1..total {
        let mut sub = vec![0usize; active.len()];
        loop {
            let tix: usize = sub.iter().zip(&strides).map(|(c, st)| c * st).sum();
            if tix != 0 && tix != s {
                red[s] |= mask_mul[mem[tix] as usize][mem[s - tix] as usize];
            }
            let mut advanced = false;
            for i in 0..sub.len() {
                if sub[i] < digit(s, i) {
                    sub[i] += 1;
                    for x in sub.iter_mut().take(i) {
                        *x = 0;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
    }
    let irr: Vec<u8> = (0..total).map(|s| mem[s] & !red[s]).collect();

    // g[s][w] = extreme lengths of factoring unit-w * prod(s)
    let mut g: Vec<Vec<LengthCell>> = vec![vec![None; nu]; total];
    #[allow(clippy::too_many_arguments)]
    fn solve(
        s: usize,
        w: usize,
        g: &mut Vec<Vec<LengthCell>>,
        irr: &[u8],
        strides: &[usize],
        exps: &[usize],
        nu: usize,
        u_one: usize,
        unit_mul: &[Vec<usize>],
        unit_inv: &[usize],
    ) -> Option<(u32, u32)> {
        if s == 0 {
            return if w == u_one { Some((0, 0)) } else { None };
        }
        if let Some(v) = g[s][w] {
            return v;
        }
        let digit = |s: usize, i: usize| (s / strides[i]) % (exps[i] + 1);
        let pivot = (0..exps.len())
            .find(|&i| digit(s, i) > 0)
            .expect("has digit");
        let mut best: Option<(u32, u32)> = None;
        let mut sub = vec![0usize; exps.len()];
        sub[pivot] = 1;
        loop {
            let b: usize = sub.iter().zip(strides).map(|(c, st)| c * st).sum();
            for v in 0..nu {
                if irr[b] & (1 << v) == 0 {
                    continue;
                }
                let w_next = unit_mul[w][unit_inv[v]];
                if let Some((mn, mx)) = solve(
                    s - b,
                    w_next,
                    g,
                    irr,
                    strides,
                    exps,
                    nu,
                    u_one,
                    unit_mul,
                    unit_inv,
                ) {
                    let cand = (mn + 1, mx + 1);
                    best = Some(match best {
                        None => cand,
                        Some((a, z)) => (a.min(cand.0), z.max(cand.1)),
                    });
                }
            }
            let mut advanced = false;
            for i in 0..sub.len() {
                if sub[i] < digit(s, i) {
                    sub[i] += 1;
                    for (j, xx) in sub.iter_mut().enumerate().take(i) {
                        *xx = if j == pivot { 1 } else { 0 };
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
        g[s][w] = Some(best);
        best
    }

    let mut per_unit = vec![None; nu];
    for (u, out) in per_unit.iter_mut().enumerate() {
        if mem[full] & (1 << u) == 0 {
            continue; // the element u * prod is not in the order
        }
        let lengths = solve(
            full, u, &mut g, &irr, &strides, &exps, nu, u_one, &unit_mul, &unit_inv,
        );
        if lengths.is_none() {
            return Err(Error::Internal(
                "an order element in the scan admitted no factorization".into(),
            ));
        }
        *out = lengths;
    }
    Ok(SignatureResult { per_unit })
}
