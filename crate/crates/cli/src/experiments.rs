//! The experiment kinds. Each returns a table, a JSON summary, and a list of
//! invariant failures (empty on success).

use ffvar_core::algebra::{IrreducibleSieve, Poly};
use ffvar_core::apstats::{variance_report, VarianceReport};
use ffvar_core::curve::{Reduction, TraceMode, TraceTable};
use ffvar_core::dirichlet::ResidueGroup;
use ffvar_core::lfun::{analyze_all, theta_class, Classification, LPolynomial, TraceSequence, UnitBuckets};
use ffvar_core::rmt::{equidistribution_report, trace_moments, EquidistributionRow};
use serde_json::{json, Value};

use crate::config::{Arithmetic, Resolved, Setup};
use crate::report::{fmt_complex, fmt_complex_list, fmt_float, fmt_int_list, Table};
use crate::RunError;

#[derive(Clone, Debug)]
pub struct Outcome {
    pub table: Table,
    pub summary: Value,
    pub failures: Vec<String>,
}

/// Trace data, unit group and buckets for one setup.
pub struct Prepared {
    pub setup: Setup,
    pub r_c: usize,
    pub table: TraceTable,
    pub group: ResidueGroup,
    pub buckets: UnitBuckets,
}

impl Prepared {
    pub fn new(setup: &Setup, max_degree: usize, mode: TraceMode) -> Result<Self, RunError> {
        let r_c = setup.r_c()?;
        let table = match &setup.arithmetic {
            Arithmetic::Curve(c) => TraceTable::for_curve(c, max_degree, mode)?,
            Arithmetic::Classical => TraceTable::classical(&setup.field, max_degree)?,
        };
        let group = ResidueGroup::new(&setup.field, &setup.modulus)?;
        let buckets = UnitBuckets::new(&table, &group, max_degree)?;
        Ok(Prepared { setup: setup.clone(), r_c, table, group, buckets })
    }

    pub fn variance(&self, n: usize) -> Result<VarianceReport, RunError> {
        Ok(variance_report(&self.table, &self.group, &self.buckets, n, self.r_c)?)
    }

    /// Every character's L-polynomial; requires `max_degree >= r_C`.
    pub fn l_polynomials(&self) -> Result<Vec<(TraceSequence, LPolynomial)>, RunError> {
        Ok(analyze_all(&self.buckets, &self.group, self.r_c)?)
    }
}

pub fn run(r: &Resolved) -> Result<Outcome, RunError> {
    match r.kind {
        crate::config::Kind::Euler => euler(r),
        crate::config::Kind::Lfun => lfun(r),
        crate::config::Kind::Variance => variance(r),
        crate::config::Kind::Sweep => sweep(r),
        crate::config::Kind::Rmt => rmt(r),
        crate::config::Kind::Selftest => crate::selftest::run(r),
    }
}

fn single(r: &Resolved) -> &Setup {
    &r.setups[0]
}

fn euler(r: &Resolved) -> Result<Outcome, RunError> {
    let setup = single(r);
    let curve = setup.curve().ok_or_else(|| RunError::Config("euler needs a curve family, not the classical function".into()))?;
    let f = &setup.field;
    let degrees = r.n.clone().unwrap_or_else(|| vec![1, 2]);
    let max = *degrees.iter().max().unwrap();
    let sieve = IrreducibleSieve::new(f, max)?;
    let mut table = Table::new(&["q", "prime", "degree", "reduction", "coefficients", "traces"]);
    let mut failures = Vec::new();
    let mut count = 0usize;
    for &d in &degrees {
        for idx in sieve.irreducibles(d) {
            let pi = Poly::monic_from_index(d, idx, f);
            let ef = curve.euler_factor(&pi)?;
            if ef.reduction == Reduction::Good {
                // c_{2g} = q^{dg}
                let expect = (f.q() as i64).pow((d * curve.genus()) as u32);
                if ef.coeffs[ef.degree()] != expect {
                    failures.push(format!("Euler factor at {pi} has top coefficient {} instead of {expect}", ef.coeffs[ef.degree()]));
                }
            }
            let reduction = match ef.reduction {
                Reduction::Good => "good",
                Reduction::Multiplicative => "multiplicative",
                Reduction::Additive => "additive",
            };
            table.push(vec![
                f.q().to_string(),
                pi.to_string(),
                d.to_string(),
                reduction.into(),
                fmt_int_list(&ef.coeffs),
                fmt_int_list(&ef.traces),
            ]);
            count += 1;
        }
    }
    let profile = curve.reduction_profile(&setup.modulus)?;
    let places: Vec<Value> = profile
        .places
        .iter()
        .map(|pl| {
            json!({
                "place": match &pl.place {
                    ffvar_core::curve::Place::Finite(p) => p.to_string(),
                    ffvar_core::curve::Place::Infinity => "infinity".into(),
                },
                "degree": pl.degree,
                "in_c": pl.in_c,
                "good_dim": pl.good_dim,
                "mult_dim": pl.mult_dim,
                "add_dim": pl.add_dim,
                "drop": pl.drop,
                "swan": pl.swan,
            })
        })
        .collect();
    let summary = json!({
        "primes": count,
        "modulus": setup.modulus.to_string(),
        "reduction_profile": {
            "places": places,
            "r_c": profile.r_c,
            "degree_l": profile.degree_l,
            "gcd_q_s": profile.gcd_with_conductor.to_string(),
        },
    });
    Ok(Outcome { table, summary, failures })
}

/// `(1 + deg Q) * rank * phi(Q) / (q - 1)`.
pub fn bad_character_bound(setup: &Setup, rank: usize, phi: u64) -> f64 {
    (1 + setup.modulus.degree().unwrap()) as f64 * rank as f64 * phi as f64 / (setup.q() as f64 - 1.0)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Census {
    pub good: usize,
    pub mixed: usize,
    pub heavy: usize,
    pub bound: f64,
}

impl Census {
    pub fn total(&self) -> usize {
        self.good + self.mixed + self.heavy
    }

    pub fn good_fraction(&self) -> f64 {
        self.good as f64 / self.total() as f64
    }

    pub fn within_bound(&self) -> bool {
        (self.mixed + self.heavy) as f64 <= self.bound
    }
}

pub fn census(setup: &Setup, polys: &[(TraceSequence, LPolynomial)], rank: usize) -> Census {
    let mut c = Census { bound: bad_character_bound(setup, rank, polys.len() as u64), ..Default::default() };
    for (_, l) in polys {
        match l.classification {
            Classification::Good => c.good += 1,
            Classification::Mixed => c.mixed += 1,
            Classification::Heavy => c.heavy += 1,
        }
    }
    c
}

pub fn good_thetas(polys: &[(TraceSequence, LPolynomial)]) -> Vec<Vec<num_complex::Complex64>> {
    polys.iter().filter_map(|(_, l)| theta_class(l).ok()).collect()
}

fn equidistribution_json(rows: &[EquidistributionRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|row| {
                json!({
                    "n": row.n,
                    "classes": row.classes,
                    "mean_trace": fmt_complex(row.mean_trace),
                    "mean_abs2": row.mean_abs2,
                    "haar_abs2": row.haar_abs2,
                    "relative_deviation": row.relative_deviation(),
                })
            })
            .collect(),
    )
}

fn lfun(r: &Resolved) -> Result<Outcome, RunError> {
    let setup = single(r);
    let rank = match &setup.arithmetic {
        Arithmetic::Curve(c) => c.rank(),
        Arithmetic::Classical => 1,
    };
    let r_c = setup.r_c()?;
    let prep = Prepared::new(setup, r_c.max(1), r.trace_mode)?;
    let polys = prep.l_polynomials()?;
    let mut table = Table::new(&[
        "q",
        "character",
        "classification",
        "degree",
        "leading_normalized",
        "min_abs_ratio",
        "max_abs_ratio",
        "coefficients",
        "inverse_roots",
    ]);
    let mut failures = Vec::new();
    let heavy_forbidden = rank >= 2 && (setup.curve().map(|c| c.genus() >= 2).unwrap_or(false) || setup.modulus.degree().unwrap() >= 2);
    for (_, l) in &polys {
        let ratios: Vec<f64> = l.roots.iter().map(|g| g.norm() / l.scale).collect();
        let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = ratios.iter().cloned().fold(0.0, f64::max);
        let chi = fmt_int_list(&l.character.exponents().iter().map(|&k| k as i64).collect::<Vec<_>>());
        if !l.has_full_degree(r_c) {
            failures.push(format!("character {chi}: degree {} (leading {:.3e}) but r_C = {r_c}", l.degree(), l.normalized_leading()));
        }
        if heavy_forbidden && max > 1.0 + 1e-3 {
            failures.push(format!("character {chi}: inverse root of size {max} times q^((1+w)/2)"));
        }
        table.push(vec![
            setup.q().to_string(),
            chi,
            l.classification.as_str().into(),
            l.degree().to_string(),
            fmt_float(l.normalized_leading()),
            if ratios.is_empty() { String::new() } else { fmt_float(min) },
            if ratios.is_empty() { String::new() } else { fmt_float(max) },
            fmt_complex_list(&l.coeffs),
            fmt_complex_list(&l.roots),
        ]);
    }
    for (i, (_, l)) in polys.iter().enumerate() {
        let j = prep.group.character_index(&prep.group.conj(&l.character));
        let other = &polys[j].1;
        let gap = l.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a.conj() - b).norm() / l.scale.powi(r_c as i32)).fold(0.0, f64::max);
        if l.coeffs.len() != other.coeffs.len() || gap > 1e-6 {
            failures.push(format!("characters {i} and {j} are conjugate but their L-polynomials are not"));
        }
    }
    let c = census(setup, &polys, rank);
    if !c.within_bound() {
        failures.push(format!("{} non-good characters exceed the bound {}", c.mixed + c.heavy, c.bound));
    }
    let thetas = good_thetas(&polys);
    let equi = if thetas.is_empty() { Value::Null } else { equidistribution_json(&equidistribution_report(&thetas, r_c.max(1))?) };
    let summary = json!({
        "modulus": setup.modulus.to_string(),
        "r_c": r_c,
        "characters": polys.len(),
        "census": {
            "good": c.good,
            "mixed": c.mixed,
            "heavy": c.heavy,
            "good_fraction": c.good_fraction(),
            "non_good_bound": c.bound,
        },
        "equidistribution": equi,
    });
    Ok(Outcome { table, summary, failures })
}

const VARIANCE_NOTE: &str = "The limit min{n, R} is an asymptotic statement as q grows, proved under a lower bound on deg Q far above desk scale; agreement here is an empirical extrapolation.";

fn variance(r: &Resolved) -> Result<Outcome, RunError> {
    let setup = single(r);
    let r_c = setup.r_c()?;
    let ns = r.degrees(r_c);
    let prep = Prepared::new(setup, *ns.iter().max().unwrap(), r.trace_mode)?;
    let mut table = Table::new(&[
        "q",
        "n",
        "phi",
        "mean",
        "trivial_trace",
        "brute_variance",
        "spectral_variance",
        "normalized_variance",
        "prediction",
        "deviation",
        "r_c",
    ]);
    for &n in &ns {
        let v = prep.variance(n)?;
        table.push(vec![
            setup.q().to_string(),
            n.to_string(),
            v.phi.to_string(),
            fmt_float(v.mean),
            v.trivial_trace.to_string(),
            fmt_float(v.brute_variance),
            fmt_float(v.spectral_variance),
            fmt_float(v.normalized),
            v.prediction.to_string(),
            fmt_float(v.deviation()),
            v.r_c.to_string(),
        ]);
    }
    let summary = json!({
        "modulus": setup.modulus.to_string(),
        "r_c": r_c,
        "theorem_mode": r.theorem_mode,
        "note": VARIANCE_NOTE,
    });
    Ok(Outcome { table, summary, failures: Vec::new() })
}

/// Whether `v` never increases.
pub fn non_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] <= w[0])
}

fn sweep(r: &Resolved) -> Result<Outcome, RunError> {
    let mut table = Table::new(&["q", "n", "normalized_variance", "prediction", "deviation", "modulus", "phi", "r_c"]);
    let mut by_n: std::collections::BTreeMap<usize, Vec<f64>> = Default::default();
    for setup in &r.setups {
        let r_c = setup.r_c()?;
        let ns = r.degrees(r_c);
        let prep = Prepared::new(setup, *ns.iter().max().unwrap(), r.trace_mode)?;
        for &n in &ns {
            let v = prep.variance(n)?;
            by_n.entry(n).or_default().push(v.deviation());
            table.push(vec![
                setup.q().to_string(),
                n.to_string(),
                fmt_float(v.normalized),
                v.prediction.to_string(),
                fmt_float(v.deviation()),
                setup.modulus.to_string(),
                v.phi.to_string(),
                r_c.to_string(),
            ]);
        }
    }
    let trend: Vec<Value> = by_n
        .iter()
        .map(|(n, devs)| json!({ "n": n, "deviations": devs, "non_increasing": non_increasing(devs) }))
        .collect();
    let summary = json!({
        "q_ladder": r.setups.iter().map(Setup::q).collect::<Vec<_>>(),
        "theorem_mode": r.theorem_mode,
        "convergence": trend,
        "note": VARIANCE_NOTE,
    });
    Ok(Outcome { table, summary, failures: Vec::new() })
}

fn rmt(r: &Resolved) -> Result<Outcome, RunError> {
    let mut table = Table::new(&["dim", "n", "samples", "mean", "std_error", "exact", "z_score"]);
    let mut worst: f64 = 0.0;
    for &dim in &r.rmt_dims {
        for m in trace_moments(dim, r.rmt_max_n, r.rmt_samples, r.seed.wrapping_add(dim as u64))? {
            worst = worst.max(m.z_score());
            table.push(vec![
                dim.to_string(),
                m.n.to_string(),
                m.samples.to_string(),
                fmt_float(m.mean),
                fmt_float(m.std_error),
                m.exact.to_string(),
                fmt_float(m.z_score()),
            ]);
        }
    }
    let summary = json!({ "max_z_score": worst, "samples": r.rmt_samples });
    Ok(Outcome { table, summary, failures: Vec::new() })
}
