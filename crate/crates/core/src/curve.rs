//! The family of curves `X: y^2 = f(x)(x - t)` over `F_q(t)` and the Galois
//! representation on the Tate module of its Jacobian.
//!
//! For a point `t0` of `F_{q^D}` the Frobenius trace is read off the
//! quadratic-character sum `a(t0) = -sum_x chi_2(f(x)(x - t0))`. The same
//! formula is used at every finite prime, good or multiplicative; the
//! identity `sum_{f in M_n} Lambda(f) = 0` (the complete L-function is `1`)
//! is the check that keeps it honest.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::algebra::{ExtElement, ExtensionField, FieldParams, IrreducibleSieve, Poly};
use crate::lfun::polynomial_from_power_sums;
use crate::{dft, par, Error, Result};

/// Default cap on the transform size used by [`CurveFamily::a_trace_batch`].
pub const DFT_BUDGET: u64 = 100_000_000;

/// Largest allowed distance from an integer before DFT rounding is rejected.
pub const DFT_RESIDUAL_LIMIT: f64 = 1e-3;

const EULER_ROUNDING_LIMIT: f64 = 1e-4;

/// `y^2 = f(x)(x - t)` with `f` monic, square-free, of degree `2g`, and
/// `f(0) = 0`. Its bad finite places are the zeros of `s = f(t)`.
#[derive(Clone, Debug)]
pub struct CurveFamily {
    field: FieldParams,
    genus: usize,
    f: Poly,
}

impl CurveFamily {
    pub fn new(field: &FieldParams, f: Poly) -> Result<Self> {
        let deg = f.degree().unwrap_or(0);
        if deg < 2 || deg % 2 != 0 {
            return Err(Error::input(format!("f = {f} must have even degree 2g >= 2")));
        }
        if !f.is_monic() {
            return Err(Error::input(format!("f = {f} must be monic")));
        }
        if !f.is_square_free(field) {
            return Err(Error::input(format!("f = {f} must be square-free")));
        }
        if !f.coeff(0).is_zero() {
            return Err(Error::input(format!("f = {f} must vanish at 0")));
        }
        Ok(CurveFamily { field: field.clone(), genus: deg / 2, f })
    }

    /// The Legendre curve `y^2 = x(x - 1)(x - t)`.
    pub fn legendre(field: &FieldParams) -> Self {
        Self::new(field, Poly::from_ints(field, &[0, -1, 1])).expect("x(x-1) is square-free")
    }

    /// Genus two: `f = x(x - 1)(x^2 + x + c)` with the smallest `c` in the
    /// prime field that makes `f` square-free.
    pub fn genus_two_example(field: &FieldParams) -> Self {
        let base = Poly::from_ints(field, &[0, -1, 1]);
        (1..field.p() as i64)
            .find_map(|c| Self::new(field, base.mul(&Poly::from_ints(field, &[c, 1, 1]), field)).ok())
            .expect("some c makes x(x-1)(x^2+x+c) square-free")
    }

    pub fn field(&self) -> &FieldParams {
        &self.field
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// `dim V = 2g`.
    pub fn rank(&self) -> usize {
        2 * self.genus
    }

    /// Frobenius weight of the representation.
    pub fn weight(&self) -> u32 {
        1
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    /// The conductor `s = f(t)`, the same coefficients read in `t`.
    pub fn conductor(&self) -> &Poly {
        &self.f
    }

    fn check_ext(&self, ext: &ExtensionField) -> Result<()> {
        if ext.base() != &self.field {
            return Err(Error::input("extension field is not built over the curve's field"));
        }
        Ok(())
    }

    /// `a(t0) = -sum_{x in F_{q^D}} chi_2(f(x)(x - t0))`, evaluated term by term.
    pub fn a_trace_naive(&self, ext: &ExtensionField, t0: ExtElement) -> i64 {
        -ext.elements()
            .map(|x| {
                let h = ext.mul(ext.eval(&self.f, x), ext.sub(x, t0));
                ext.quadratic_character(h) as i64
            })
            .sum::<i64>()
    }

    /// `a(t0)` for every `t0` in `F_{q^D}` at once, indexed by packed element.
    ///
    /// The sum is the correlation of `g(x) = chi_2(f(x))` with `chi_2` over
    /// the additive group `(Z/p)^(eD)`, computed with a multidimensional DFT.
    pub fn a_trace_batch(&self, ext: &ExtensionField, budget: u64) -> Result<Vec<i64>> {
        self.check_ext(ext)?;
        if ext.size() > budget {
            return Err(Error::resource(format!(
                "DFT over F_{{{}^{}}} needs {} complex values, budget is {budget}",
                self.field.q(),
                ext.degree(),
                ext.size()
            )));
        }
        let g: Vec<f64> = ext.elements().map(|x| ext.quadratic_character(ext.eval(&self.f, x)) as f64).collect();
        let h: Vec<f64> = ext.elements().map(|y| ext.quadratic_character(y) as f64).collect();
        let axes = self.field.e() as usize * ext.degree();
        let corr = dft::correlate(&g, &h, self.field.p() as usize, axes);
        corr.iter()
            .enumerate()
            .map(|(i, &c)| {
                let r = libm::round(c);
                if libm::fabs(c - r) > DFT_RESIDUAL_LIMIT {
                    Err(Error::inconsistent(format!("DFT trace at element {i} is {c}, not near an integer")))
                } else {
                    Ok(-(r as i64))
                }
            })
            .collect()
    }

    /// `Lambda(f) = d * a_{pi,m}` if `f = pi^m` with `deg pi = d`, else `0`.
    /// Works from scratch: factor, embed a root of `pi`, count points.
    pub fn von_mangoldt(&self, f: &Poly) -> Result<i64> {
        if !f.is_monic() || f.degree().unwrap_or(0) == 0 {
            return Err(Error::input("von Mangoldt function needs a monic polynomial of degree >= 1"));
        }
        let Some((pi, m)) = f.prime_power_decompose(&self.field) else {
            return Ok(0);
        };
        let d = pi.degree().unwrap();
        let ext = ExtensionField::new(&self.field, d * m as usize)?;
        let t0 = ext.embed_root(&pi)?;
        Ok(d as i64 * self.a_trace_naive(&ext, t0))
    }

    /// Whether the node over a bad point `t0` has rational tangents. With
    /// `h = (x - t0)^2 h1`, the tangents are `y = +-sqrt(h1(t0)) (x - t0)`,
    /// and `h1(t0) = f'(t0)`. `None` if `t0` is a good point.
    pub fn node_is_split(&self, ext: &ExtensionField, t0: ExtElement) -> Option<bool> {
        if !ext.eval(&self.f, t0).is_zero() {
            return None;
        }
        let slope = ext.eval(&self.f.derivative(&self.field), t0);
        Some(ext.quadratic_character(slope) == 1)
    }

    /// `det(1 - T Frob_pi | V^{I(pi)})` from the traces `a_{pi,1..2g}`.
    pub fn euler_factor(&self, pi: &Poly) -> Result<EulerFactor> {
        if !pi.is_irreducible(&self.field)? {
            return Err(Error::input(format!("{pi} is not irreducible")));
        }
        let d = pi.degree().unwrap();
        let traces = (1..=self.rank())
            .map(|m| {
                let ext = ExtensionField::new(&self.field, d * m)?;
                let t0 = ext.embed_root(pi)?;
                Ok(self.a_trace_naive(&ext, t0))
            })
            .collect::<Result<Vec<i64>>>()?;
        let sums: Vec<Complex64> = traces.iter().map(|&a| Complex64::new(a as f64, 0.0)).collect();
        let float = polynomial_from_power_sums(&sums);
        let mut coeffs = Vec::with_capacity(float.len());
        for (k, c) in float.iter().enumerate() {
            let r = libm::round(c.re);
            if libm::fabs(c.re - r) > EULER_ROUNDING_LIMIT || libm::fabs(c.im) > EULER_ROUNDING_LIMIT {
                return Err(Error::inconsistent(format!("Euler factor coefficient {k} at {pi} is {c}")));
            }
            coeffs.push(r as i64);
        }
        let bad = self.conductor().rem(pi, &self.field).is_zero();
        let reduction = if bad { Reduction::Multiplicative } else { Reduction::Good };
        let degree = self.rank() - usize::from(bad);
        while coeffs.len() > degree + 1 {
            if coeffs.pop() != Some(0) {
                return Err(Error::inconsistent(format!(
                    "Euler factor at bad prime {pi} has a nonzero coefficient beyond degree {degree}"
                )));
            }
        }
        Ok(EulerFactor { prime: pi.clone(), coeffs, traces, reduction })
    }

    /// Local reduction data at the primes of `Q` and `s` and at infinity,
    /// with the resulting degree invariants.
    pub fn reduction_profile(&self, modulus: &Poly) -> Result<ReductionProfile> {
        let f = &self.field;
        if !modulus.is_monic() || !modulus.is_square_free(f) {
            return Err(Error::input(format!("Q = {modulus} must be monic and square-free")));
        }
        let g = self.genus;
        let rank = self.rank();
        let s = self.conductor();
        let bad_primes = s.factor_square_free(f)?;
        let q_primes = if modulus.degree() == Some(0) { Vec::new() } else { modulus.factor_square_free(f)? };

        let mut places: Vec<PlaceReduction> = Vec::new();
        for pi in bad_primes.iter().chain(q_primes.iter()) {
            if places.iter().any(|pl| pl.place == Place::Finite(pi.clone())) {
                continue;
            }
            let bad = bad_primes.contains(pi);
            places.push(PlaceReduction {
                place: Place::Finite(pi.clone()),
                degree: pi.degree().unwrap(),
                in_c: q_primes.contains(pi),
                good_dim: if bad { g - 1 } else { g },
                mult_dim: usize::from(bad),
                add_dim: 0,
                drop: usize::from(bad),
                swan: 0,
            });
        }
        places.push(PlaceReduction {
            place: Place::Infinity,
            degree: 1,
            in_c: true,
            good_dim: 0,
            mult_dim: 0,
            add_dim: g,
            drop: rank,
            swan: 0,
        });
        places.sort_by_key(|pl| match &pl.place {
            Place::Finite(p) => (0, p.canonical_key(f)),
            Place::Infinity => (1, (0, 0)),
        });

        // drop_v = dim V - 2 g_v - m_v away from infinity
        for pl in &places {
            if let Place::Finite(_) = pl.place {
                debug_assert_eq!(pl.drop, rank - 2 * pl.good_dim - pl.mult_dim);
            }
        }
        let total_drop: usize = places.iter().map(|pl| pl.degree * pl.drop).sum();
        let c_drop: usize = places.iter().filter(|pl| pl.in_c).map(|pl| pl.degree * pl.drop).sum();
        let swan: usize = places.iter().map(|pl| pl.swan).sum();
        let deg_q = modulus.degree().unwrap();
        let r_c = (total_drop + swan + deg_q * rank) as i64 - c_drop as i64 - rank as i64;
        let degree_l = (total_drop + swan) as i64 - 2 * rank as i64;
        let gcd_deg = modulus.gcd(s, f).degree().unwrap();
        let closed_form = (rank * deg_q) as i64 - gcd_deg as i64;
        if r_c != closed_form {
            return Err(Error::inconsistent(format!("r_C = {r_c} disagrees with 2g deg Q - deg gcd(Q,s) = {closed_form}")));
        }
        Ok(ReductionProfile {
            places,
            total_drop,
            c_drop,
            swan,
            r_c: r_c as usize,
            degree_l,
            gcd_with_conductor: modulus.gcd(s, f),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reduction {
    Good,
    Multiplicative,
    Additive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EulerFactor {
    pub prime: Poly,
    /// `c_0 = 1, c_1, ..., c_deg`.
    pub coeffs: Vec<i64>,
    /// `a_{pi,1..2g}`.
    pub traces: Vec<i64>,
    pub reduction: Reduction,
}

impl EulerFactor {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    Finite(Poly),
    Infinity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceReduction {
    pub place: Place,
    pub degree: usize,
    /// Whether the place belongs to `C = {infinity} + primes of Q`.
    pub in_c: bool,
    pub good_dim: usize,
    pub mult_dim: usize,
    pub add_dim: usize,
    pub drop: usize,
    pub swan: usize,
}

impl PlaceReduction {
    pub fn reduction(&self) -> Reduction {
        if self.add_dim > 0 {
            Reduction::Additive
        } else if self.mult_dim > 0 {
            Reduction::Multiplicative
        } else {
            Reduction::Good
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionProfile {
    pub places: Vec<PlaceReduction>,
    /// `sum_v deg(v) drop_v` over all places.
    pub total_drop: usize,
    /// The same sum over `C`.
    pub c_drop: usize,
    pub swan: usize,
    /// Degree of every twisted partial L-function.
    pub r_c: usize,
    /// Degree of the complete L-function.
    pub degree_l: i64,
    pub gcd_with_conductor: Poly,
}

/// Where a degree's traces came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Naive,
    Dft,
    /// Classical von Mangoldt: primes from an irreducibility sieve.
    Sieve,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceMode {
    Naive,
    Dft,
    /// Naive for small fields, DFT otherwise.
    Auto,
}

/// A prime power `pi^m` with the trace `a_{pi,m}` of `Frob_pi^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimePower {
    pub prime: Poly,
    pub exponent: u32,
    pub trace: i64,
}

impl PrimePower {
    pub fn prime_degree(&self) -> usize {
        self.prime.degree().unwrap()
    }

    pub fn degree(&self) -> usize {
        self.prime_degree() * self.exponent as usize
    }

    /// `Lambda(pi^m) = deg(pi) * a_{pi,m}`.
    pub fn lambda(&self) -> i64 {
        self.prime_degree() as i64 * self.trace
    }
}

#[derive(Clone, Debug)]
pub struct DegreeTraces {
    pub degree: usize,
    pub provenance: Provenance,
    pub entries: Vec<PrimePower>,
}

/// Every prime power of degree `1..=max_degree` with its local trace.
///
/// The classical von Mangoldt function is the case of the trivial rank-one
/// representation: weight `0`, every trace `1`.
#[derive(Clone, Debug)]
pub struct TraceTable {
    field: FieldParams,
    weight: u32,
    rank: usize,
    degrees: Vec<DegreeTraces>,
    index: BTreeMap<(usize, u64, u32), (usize, usize)>,
}

/// Below this many `(t0, x)` pairs per degree the naive sum is used in
/// [`TraceMode::Auto`].
const AUTO_NAIVE_LIMIT: u64 = 4_000_000;

/// Largest extension `F_{q^D}` a trace table will enumerate.
pub const TRACE_FIELD_LIMIT: u64 = 10_000_000;

/// Cap on `(t0, x)` pairs per degree for [`TraceMode::Naive`].
pub const NAIVE_PAIR_BUDGET: u64 = 100_000_000_000;

/// Galois orbits of `F_{q^D}`: each orbit has a smallest element `t0`,
/// minimal polynomial `pi` of degree `d | D`, and names the prime power
/// `pi^(D/d)`.
fn orbit_representatives(ext: &ExtensionField) -> Vec<(ExtElement, Poly, u32)> {
    let mut seen = vec![false; ext.size() as usize];
    let mut out = Vec::new();
    for x in ext.elements() {
        if seen[x.index() as usize] {
            continue;
        }
        let conj = ext.conjugates(x);
        for c in &conj {
            seen[c.index() as usize] = true;
        }
        let pi = ext.minimal_polynomial(x);
        out.push((x, pi, (ext.degree() / conj.len()) as u32));
    }
    out
}

impl TraceTable {
    pub fn for_curve(curve: &CurveFamily, max_degree: usize, mode: TraceMode) -> Result<Self> {
        let field = curve.field();
        let q = field.q() as u64;
        let largest = q.checked_pow(max_degree as u32).filter(|&n| n <= TRACE_FIELD_LIMIT).ok_or_else(|| {
            Error::resource(format!("trace table to degree {max_degree} over F_{q} exceeds {TRACE_FIELD_LIMIT} points"))
        })?;
        if mode == TraceMode::Naive && largest * largest / max_degree.max(1) as u64 > NAIVE_PAIR_BUDGET {
            return Err(Error::resource(format!("naive traces to degree {max_degree} over F_{q} exceed the budget; use dft")));
        }
        let degrees = par::map_range(max_degree, |i| -> Result<DegreeTraces> {
            let degree = i + 1;
            let ext = ExtensionField::new(field, degree)?;
            let reps = orbit_representatives(&ext);
            let size = ext.size();
            let use_dft = match mode {
                TraceMode::Naive => false,
                TraceMode::Dft => true,
                TraceMode::Auto => size.saturating_mul(size) / degree as u64 > AUTO_NAIVE_LIMIT,
            };
            let (traces, provenance) = if use_dft {
                let all = curve.a_trace_batch(&ext, DFT_BUDGET)?;
                (reps.iter().map(|(x, _, _)| all[x.index() as usize]).collect::<Vec<_>>(), Provenance::Dft)
            } else {
                (par::map_slice(&reps, |(x, _, _)| curve.a_trace_naive(&ext, *x)), Provenance::Naive)
            };
            let entries = reps
                .into_iter()
                .zip(traces)
                .map(|((_, prime, exponent), trace)| PrimePower { prime, exponent, trace })
                .collect();
            Ok(DegreeTraces { degree, provenance, entries })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        let table = Self::assemble(field, curve.weight(), curve.rank(), degrees);
        table.check_weil_bound()?;
        Ok(table)
    }

    /// The classical von Mangoldt function, with primes from an
    /// irreducibility sieve.
    pub fn classical(field: &FieldParams, max_degree: usize) -> Result<Self> {
        let sieve = IrreducibleSieve::new(field, max_degree)?;
        let degrees = (1..=max_degree)
            .map(|degree| {
                let entries = (1..=degree)
                    .filter(|d| degree % d == 0)
                    .flat_map(|d| {
                        sieve.irreducibles(d).map(move |i| PrimePower {
                            prime: Poly::monic_from_index(d, i, field),
                            exponent: (degree / d) as u32,
                            trace: 1,
                        })
                    })
                    .collect();
                DegreeTraces { degree, provenance: Provenance::Sieve, entries }
            })
            .collect();
        Ok(Self::assemble(field, 0, 1, degrees))
    }

    fn assemble(field: &FieldParams, weight: u32, rank: usize, degrees: Vec<DegreeTraces>) -> Self {
        let mut index = BTreeMap::new();
        for (i, dt) in degrees.iter().enumerate() {
            for (j, e) in dt.entries.iter().enumerate() {
                index.insert((e.prime_degree(), e.prime.monic_index(field), e.exponent), (i, j));
            }
        }
        TraceTable { field: field.clone(), weight, rank, degrees, index }
    }

    /// `|a_{pi,m}| <= rank * q^(dm w / 2)`.
    fn check_weil_bound(&self) -> Result<()> {
        let q = self.field.q() as f64;
        for dt in &self.degrees {
            let bound = self.rank as f64 * libm::pow(q, dt.degree as f64 * self.weight as f64 / 2.0);
            if let Some(e) = dt.entries.iter().find(|e| e.trace as f64 > bound + 1e-9 || (-e.trace) as f64 > bound + 1e-9) {
                return Err(Error::inconsistent(format!(
                    "trace {} at {}^{} violates the Weil bound {bound}",
                    e.trace, e.prime, e.exponent
                )));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &FieldParams {
        &self.field
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, n: usize) -> Result<&DegreeTraces> {
        n.checked_sub(1)
            .and_then(|i| self.degrees.get(i))
            .ok_or_else(|| Error::resource(format!("no trace data for degree {n} (table covers 1..={})", self.degrees.len())))
    }

    pub fn lookup(&self, prime: &Poly, exponent: u32) -> Option<&PrimePower> {
        let key = (prime.degree()?, prime.monic_index(&self.field), exponent);
        self.index.get(&key).map(|&(i, j)| &self.degrees[i].entries[j])
    }

    /// `Lambda(f)` for a monic `f`, read from the table.
    pub fn von_mangoldt(&self, f: &Poly) -> Result<i64> {
        let n = f.degree().filter(|&n| n >= 1 && f.is_monic()).ok_or_else(|| Error::input("need a monic polynomial of degree >= 1"))?;
        self.degree(n)?;
        match f.prime_power_decompose(&self.field) {
            None => Ok(0),
            Some((pi, m)) => self
                .lookup(&pi, m)
                .map(PrimePower::lambda)
                .ok_or_else(|| Error::inconsistent(format!("prime power {pi}^{m} missing from the trace table"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::enumerate_monic;

    fn f3() -> FieldParams {
        FieldParams::new(3, 1).unwrap()
    }

    #[test]
    fn validation() {
        let f = f3();
        assert!(CurveFamily::new(&f, Poly::from_ints(&f, &[0, 0, 1])).is_err()); // x^2, not square-free
        assert!(CurveFamily::new(&f, Poly::from_ints(&f, &[1, 0, 1])).is_err()); // f(0) != 0
        assert!(CurveFamily::new(&f, Poly::from_ints(&f, &[0, 1, 1, 1])).is_err()); // odd degree
        assert!(CurveFamily::new(&f, Poly::from_ints(&f, &[0, 1, 2])).is_err()); // not monic
        let c = CurveFamily::genus_two_example(&f);
        assert_eq!(c.genus(), 2);
        assert_eq!(c.f(), &Poly::from_ints(&f, &[0, -1, 1]).mul(&Poly::from_ints(&f, &[2, 1, 1]), &f));
    }

    #[test]
    fn legendre_traces_over_f3() {
        let f = f3();
        let curve = CurveFamily::legendre(&f);
        let ext = ExtensionField::new(&f, 1).unwrap();
        let at = |t: i64| curve.a_trace_naive(&ext, ext.from_base(f.from_int(t)));
        assert_eq!(at(2), 0);
        assert_eq!(at(1), 1);
        assert_eq!(at(0), -1);
        assert_eq!(curve.a_trace_batch(&ext, DFT_BUDGET).unwrap(), [-1, 1, 0]);
    }

    #[test]
    fn split_node_sign_matches_trace() {
        for q in [3u64, 5, 7, 9, 11] {
            let f = FieldParams::with_order(q).unwrap();
            let curve = CurveFamily::legendre(&f);
            let ext = ExtensionField::new(&f, 1).unwrap();
            for t0 in [0, 1] {
                let t0 = ext.from_base(f.from_int(t0));
                let split = curve.node_is_split(&ext, t0).unwrap();
                assert_eq!(curve.a_trace_naive(&ext, t0), if split { 1 } else { -1 });
            }
            assert_eq!(curve.node_is_split(&ext, ext.from_base(f.from_int(2))), None);
        }
    }

    #[test]
    fn batch_matches_naive_small() {
        let f = f3();
        let curve = CurveFamily::legendre(&f);
        for d in 1..=3 {
            let ext = ExtensionField::new(&f, d).unwrap();
            let batch = curve.a_trace_batch(&ext, DFT_BUDGET).unwrap();
            for t0 in ext.elements() {
                assert_eq!(batch[t0.index() as usize], curve.a_trace_naive(&ext, t0));
            }
        }
        let ext = ExtensionField::new(&f, 4).unwrap();
        assert!(matches!(curve.a_trace_batch(&ext, 80), Err(Error::Resource(_))));
    }

    #[test]
    fn von_mangoldt_examples() {
        let f = f3();
        let curve = CurveFamily::legendre(&f);
        let lin = |c: i64| Poly::from_ints(&f, &[-c, 1]);
        assert_eq!(curve.von_mangoldt(&lin(0).mul(&lin(1), &f)).unwrap(), 0);
        assert_eq!(curve.von_mangoldt(&lin(1)).unwrap(), 1);
        let total: i64 = (0..3).map(|c| curve.von_mangoldt(&lin(c)).unwrap()).sum();
        assert_eq!(total, 0);
        assert!(curve.von_mangoldt(&Poly::one()).is_err());
    }

    #[test]
    fn euler_factor_examples() {
        let f = f3();
        let curve = CurveFamily::legendre(&f);
        let lin = |c: i64| Poly::from_ints(&f, &[-c, 1]);
        let good = curve.euler_factor(&lin(2)).unwrap();
        assert_eq!(good.coeffs, [1, 0, 3]);
        assert_eq!(good.reduction, Reduction::Good);
        // cross-check a_2 against #E(F_9) = 9 + 1 - a_2 counted by hand
        let ext = ExtensionField::new(&f, 2).unwrap();
        let t0 = ext.from_base(f.from_int(2));
        let affine: i64 = ext
            .elements()
            .map(|x| {
                let h = ext.mul(ext.mul(x, ext.sub(x, ExtElement::ONE)), ext.sub(x, t0));
                ext.elements().filter(|&y| ext.mul(y, y) == h).count() as i64
            })
            .sum();
        assert_eq!(good.traces[1], 9 + 1 - (affine + 1));
        assert_eq!(curve.euler_factor(&lin(1)).unwrap().coeffs, [1, -1]);
        let nonsplit = curve.euler_factor(&lin(0)).unwrap();
        assert_eq!(nonsplit.coeffs, [1, 1]);
        assert_eq!(nonsplit.traces, [-1, 1]);
        assert_eq!(nonsplit.reduction, Reduction::Multiplicative);
        assert!(curve.euler_factor(&Poly::from_ints(&f, &[0, 0, 1])).is_err());
    }

    #[test]
    fn euler_factor_functional_symmetry() {
        // at good primes c_k q^(d(g-k)) = c_(2g-k)
        for q in [3u64, 5] {
            let f = FieldParams::with_order(q).unwrap();
            let curve = CurveFamily::genus_two_example(&f);
            let g = curve.genus() as i32;
            for pi in enumerate_monic(&f, 1).chain(enumerate_monic(&f, 2).take(6)) {
                if !pi.is_irreducible(&f).unwrap() {
                    continue;
                }
                let ef = curve.euler_factor(&pi).unwrap();
                if ef.reduction != Reduction::Good {
                    assert_eq!(ef.degree(), 3);
                    continue;
                }
                let qd = (q as f64).powi(pi.degree().unwrap() as i32);
                for k in 0..=2 * g {
                    let lhs = ef.coeffs[k as usize] as f64 * qd.powi(g - k);
                    let rhs = ef.coeffs[(2 * g - k) as usize] as f64;
                    assert!((lhs - rhs).abs() <= 1e-6 * lhs.abs().max(1.0), "q={q} pi={pi} k={k}");
                }
            }
        }
    }

    #[test]
    fn reduction_profiles() {
        let f = FieldParams::new(5, 1).unwrap();
        let legendre = CurveFamily::legendre(&f);
        let t = Poly::var();
        let q3 = t.mul(&Poly::from_ints(&f, &[2, 0, 1]), &f);
        let prof = legendre.reduction_profile(&q3).unwrap();
        assert_eq!(prof.r_c, 5);
        assert_eq!(prof.degree_l, 0);
        let inf = prof.places.last().unwrap();
        assert_eq!((inf.good_dim, inf.mult_dim, inf.add_dim, inf.drop), (0, 0, 1, 2));
        assert_eq!(inf.reduction(), Reduction::Additive);
        let at_t = &prof.places[0];
        assert_eq!(at_t.place, Place::Finite(t.clone()));
        assert_eq!((at_t.good_dim, at_t.mult_dim, at_t.drop), (0, 1, 1));

        let g2 = CurveFamily::genus_two_example(&f);
        let q4 = t.mul(&Poly::from_ints(&f, &[2, 0, 0, 1]), &f);
        assert!(q4.is_square_free(&f));
        let prof = g2.reduction_profile(&q4).unwrap();
        assert_eq!(prof.r_c, 15);
        assert_eq!(prof.degree_l, 0);
        assert!(legendre.reduction_profile(&t.mul(&t, &f)).is_err());
    }

    #[test]
    fn global_triviality_small() {
        for (q, n_max) in [(3u64, 4), (5, 3)] {
            let f = FieldParams::with_order(q).unwrap();
            let curve = CurveFamily::legendre(&f);
            for n in 1..=n_max {
                let total: i64 = enumerate_monic(&f, n).map(|g| curve.von_mangoldt(&g).unwrap()).sum();
                assert_eq!(total, 0, "q={q} n={n}");
            }
        }
    }

    #[test]
    fn trace_table_agrees_with_direct() {
        let f = f3();
        let curve = CurveFamily::legendre(&f);
        let naive = TraceTable::for_curve(&curve, 4, TraceMode::Naive).unwrap();
        let dft = TraceTable::for_curve(&curve, 4, TraceMode::Dft).unwrap();
        for n in 1..=4 {
            let a = naive.degree(n).unwrap();
            let b = dft.degree(n).unwrap();
            assert_eq!(a.provenance, Provenance::Naive);
            assert_eq!(b.provenance, Provenance::Dft);
            assert_eq!(a.entries, b.entries);
            let total: i64 = enumerate_monic(&f, n).map(|g| naive.von_mangoldt(&g).unwrap()).sum();
            assert_eq!(total, 0);
        }
        for g in enumerate_monic(&f, 3) {
            assert_eq!(naive.von_mangoldt(&g).unwrap(), curve.von_mangoldt(&g).unwrap());
        }
        assert!(matches!(naive.degree(5), Err(Error::Resource(_))));
    }

    #[test]
    fn classical_table_counts() {
        let f = FieldParams::new(5, 1).unwrap();
        let table = TraceTable::classical(&f, 4).unwrap();
        for n in 1..=4 {
            let total: i64 = table.degree(n).unwrap().entries.iter().map(PrimePower::lambda).sum();
            assert_eq!(total, 5i64.pow(n as u32));
        }
        assert_eq!(table.weight(), 0);
    }
}
