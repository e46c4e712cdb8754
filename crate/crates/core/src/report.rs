//! Canonical JSON serialization for all report types.
//!
//! Field order is canonical (alphabetical within each object), floating
//! values carry 12 significant digits, exact rationals are emitted as
//! string fractions, and big integers as decimal strings.

use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Number, Value};

use crate::classify::{
    ClassificationVerdict, DeligneFailure, Property, RankEstimate, Status, Witness,
};
use crate::diffset::{BoundsReport, ExactResult, ForbiddenSet, InheritanceReport, ScalingReport};
use crate::error::{Error, Result};
use crate::expsum::{Arc, ArcPoint, ExpSumReport, MajorArcReport, MinorArcReport};
use crate::padic::{AuxiliaryPolynomial, IntersectivityVerdict, PAdicRoot, RootRule, RootSelection};
use crate::poly::{IntPolynomial, MultiIndex};
use crate::sieve::{SieveCountReport, SieveProfile};

/// JSON number with 12 significant digits.
pub fn f12(x: f64) -> Value {
    if !x.is_finite() {
        return Value::String(format!("{x}"));
    }
    let s = format!("{x:.11e}");
    match Number::from_str(&s) {
        Ok(n) => Value::Number(n),
        Err(_) => Value::String(s),
    }
}

pub fn complex_json(z: Complex64) -> Value {
    Value::Array(vec![f12(z.re), f12(z.im)])
}

pub fn bigint_json(v: &BigInt) -> Value {
    Value::String(v.to_string())
}

pub fn rational_json(r: &BigRational) -> Value {
    json!({
        "num": r.numer().to_string(),
        "den": r.denom().to_string(),
    })
}

pub fn poly_json(p: &IntPolynomial) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .collect::<Vec<_>>()
        .into_iter()
        .rev() // leading term first
        .map(|(idx, c)| {
            json!({
                "exp": idx.exps(),
                "coef": c.to_string(),
            })
        })
        .collect();
    json!({
        "num_vars": p.num_vars(),
        "terms": terms,
        "text": p.to_string(),
    })
}

pub fn poly_from_json(v: &Value) -> Result<IntPolynomial> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::InvalidParameter("polynomial JSON must be an object".into()))?;
    let num_vars = obj
        .get("num_vars")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::InvalidParameter("missing num_vars".into()))?
        as usize;
    let mut p = IntPolynomial::zero(num_vars.max(1));
    let terms = obj
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::InvalidParameter("missing terms".into()))?;
    for t in terms {
        let exp: Vec<u32> = t
            .get("exp")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidParameter("term missing exp".into()))?
            .iter()
            .map(|e| e.as_u64().unwrap_or(0) as u32)
            .collect();
        let coef_str = t
            .get("coef")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::InvalidParameter("term missing coef".into()))?;
        let coef = BigInt::from_str(coef_str)
            .map_err(|e| Error::InvalidParameter(format!("bad coefficient: {e}")))?;
        p.add_term(MultiIndex::new(exp), coef);
    }
    Ok(p)
}

pub fn root_json(r: &PAdicRoot) -> Value {
    let residue: Vec<Value> = r.residue.iter().map(bigint_json).collect();
    json!({
        "p": r.prime,
        "j": r.precision,
        "residue": residue,
        "m": r.multiplicity,
        "nonsingular": r.nonsingular,
        "multiplicity_caveat": r.multiplicity_caveat,
    })
}

pub fn selection_json(sel: &RootSelection) -> Value {
    let roots: Vec<Value> = sel.stored_roots().map(|(_, r)| root_json(r)).collect();
    let mut obj = Map::new();
    obj.insert("poly".into(), poly_json(sel.polynomial()));
    match sel.rule() {
        RootRule::IntegerRoot(n) => {
            obj.insert("rule".into(), Value::String("integer_root".into()));
            obj.insert(
                "integer_root".into(),
                Value::Array(n.iter().map(bigint_json).collect()),
            );
        }
        RootRule::Table => {
            obj.insert("rule".into(), Value::String("table".into()));
        }
    }
    obj.insert("roots".into(), Value::Array(roots));
    Value::Object(obj)
}

pub fn selection_from_json(v: &Value) -> Result<RootSelection> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::InvalidParameter("selection JSON must be an object".into()))?;
    let poly = poly_from_json(
        obj.get("poly")
            .ok_or_else(|| Error::InvalidParameter("missing poly".into()))?,
    )?;
    let rule = obj
        .get("rule")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::InvalidParameter("missing rule".into()))?;
    let mut sel = match rule {
        "integer_root" => {
            let root: Vec<BigInt> = obj
                .get("integer_root")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::InvalidParameter("missing integer_root".into()))?
                .iter()
                .map(|x| {
                    BigInt::from_str(x.as_str().unwrap_or("0"))
                        .map_err(|e| Error::InvalidParameter(format!("bad root entry: {e}")))
                })
                .collect::<Result<_>>()?;
            RootSelection::integer_root(poly, root)?
        }
        "table" => RootSelection::from_table(poly, Vec::new())?,
        other => {
            return Err(Error::InvalidParameter(format!("unknown rule '{other}'")));
        }
    };
    if let Some(roots) = obj.get("roots").and_then(Value::as_array) {
        for rv in roots {
            let p = rv
                .get("p")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::InvalidParameter("root missing p".into()))?;
            let j = rv
                .get("j")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::InvalidParameter("root missing j".into()))?
                as u32;
            let residue: Vec<BigInt> = rv
                .get("residue")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::InvalidParameter("root missing residue".into()))?
                .iter()
                .map(|x| {
                    BigInt::from_str(x.as_str().unwrap_or("0"))
                        .map_err(|e| Error::InvalidParameter(format!("bad residue: {e}")))
                })
                .collect::<Result<_>>()?;
            let root = crate::padic::root_from_residue(sel.polynomial(), p, j, residue)?;
            sel.insert(root);
        }
    }
    Ok(sel)
}

pub fn profile_json(p: &SieveProfile) -> Value {
    let table: Vec<Value> = p
        .entries()
        .iter()
        .map(|e| json!({"p": e.p, "gamma": e.gamma, "j": e.j}))
        .collect();
    json!({
        "Y": p.cutoff(),
        "table": table,
        "weight": rational_json(p.weight()),
        "weight_approx": f12(p.weight().to_f64().unwrap_or(f64::NAN)),
    })
}

pub fn sieve_count_json(r: &SieveCountReport) -> Value {
    json!({
        "count": r.count,
        "main_term": rational_json(&r.main_term),
        "main_term_approx": f12(r.main_term.to_f64().unwrap_or(f64::NAN)),
        "error": rational_json(&r.error),
        "error_approx": f12(r.error.to_f64().unwrap_or(f64::NAN)),
    })
}

fn status_str(s: Status) -> &'static str {
    match s {
        Status::Certified => "Certified",
        Status::Refuted => "Refuted",
        Status::Unknown => "Unknown",
    }
}

fn property_str(p: Property) -> &'static str {
    match p {
        Property::SmoothModP => "SmoothModP",
        Property::Deligne => "Deligne",
        Property::StronglyDeligne => "StronglyDeligne",
        Property::SmoothlyIntersective => "SmoothlyIntersective",
        Property::Rank => "Rank",
    }
}

pub fn failure_json(f: &DeligneFailure) -> Value {
    json!({
        "d": f.d,
        "p": f.p,
        "top_degree": f.top_degree,
        "disc_zero_mod_p": f.disc_zero_mod_p,
        "singular_point": f.singular_point,
        "reason": f.reason,
    })
}

pub fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::ProjectivePoint { p, coords } => json!({
            "kind": "projective_point",
            "mod_p": p,
            "coords": coords.iter().map(bigint_json).collect::<Vec<_>>(),
        }),
        Witness::Prime(p) => json!({"kind": "prime", "p": p}),
        Witness::Rank(r) => json!({"kind": "rank", "rank": r}),
        Witness::RepeatedFactor(f) => json!({
            "kind": "repeated_factor",
            "factor": poly_json(f),
        }),
        Witness::FailureFamily(fs) => json!({
            "kind": "failure_family",
            "failures_total": fs.len(),
            // Emission capped; the full family is available programmatically.
            "failures": fs.iter().take(100).map(failure_json).collect::<Vec<_>>(),
        }),
        Witness::DValue(d) => json!({"kind": "d_value", "d": d}),
    }
}

pub fn verdict_json(v: &ClassificationVerdict) -> Value {
    json!({
        "property": property_str(v.property),
        "status": status_str(v.status),
        "witness": v.witness.as_ref().map(witness_json),
        "certificate": v.certificate,
        "budget_used": {
            "points_scanned": v.budget_used.points_scanned.to_string(),
            "limits_hit": v.budget_used.limits_hit,
        },
    })
}

pub fn rank_json(r: &RankEstimate) -> Value {
    match r {
        RankEstimate::Exact { rank, heuristic } => json!({
            "rank": rank,
            "exact": !heuristic,
            "heuristic": heuristic,
        }),
        RankEstimate::Interval { lo, hi } => json!({
            "rank_lo": lo,
            "rank_hi": hi,
            "heuristic": true,
        }),
    }
}

pub fn intersectivity_json(v: &IntersectivityVerdict) -> Value {
    match v {
        IntersectivityVerdict::CertifiedAllPrimes { reason } => json!({
            "verdict": "CertifiedAllPrimes",
            "reason": reason,
        }),
        IntersectivityVerdict::CertifiedUpTo(b) => json!({
            "verdict": "CertifiedUpTo",
            "bound": b,
        }),
        IntersectivityVerdict::NonIntersectiveWitness { q } => json!({
            "verdict": "NonIntersectiveWitness",
            "q": q.to_string(),
        }),
        IntersectivityVerdict::Unknown { p, reason } => json!({
            "verdict": "Unknown",
            "p": p,
            "reason": reason,
        }),
    }
}

pub fn aux_json(a: &AuxiliaryPolynomial) -> Value {
    json!({
        "d": a.d,
        "r_d": a.r_d.iter().map(bigint_json).collect::<Vec<_>>(),
        "lambda": a.lambda_d.to_string(),
        "poly": poly_json(&a.poly),
        "content": a.poly.content().to_string(),
    })
}

pub fn expsum_json(r: &ExpSumReport) -> Value {
    let mut obj = Map::new();
    obj.insert("value".into(), complex_json(r.value));
    obj.insert("abs".into(), f12(r.value.norm()));
    obj.insert(
        "bound".into(),
        r.bound.map(f12).unwrap_or(Value::Null),
    );
    obj.insert(
        "bound_expression".into(),
        r.bound_expression
            .as_ref()
            .map(|s| Value::String(s.clone()))
            .unwrap_or(Value::Null),
    );
    obj.insert(
        "ratio".into(),
        r.ratio.map(f12).unwrap_or(Value::Null),
    );
    obj.insert("terms".into(), Value::from(r.terms));
    obj.insert("exact_zero".into(), Value::Bool(r.exact_zero));
    for (k, v) in &r.params {
        obj.insert(format!("param_{k}"), Value::String(v.clone()));
    }
    Value::Object(obj)
}

pub fn arc_json(a: &ArcPoint) -> Value {
    json!({
        "alpha": rational_json(&a.alpha),
        "a": a.a,
        "q": a.q,
        "beta": rational_json(&a.beta),
        "beta_approx": f12(a.beta.to_f64().unwrap_or(f64::NAN)),
        "q_bound": a.q_bound,
        "arc": match a.arc {
            Arc::Major { q } => json!({"kind": "Major", "q": q}),
            Arc::Minor => json!({"kind": "Minor"}),
        },
    })
}

pub fn major_arc_json(r: &MajorArcReport) -> Value {
    json!({
        "computed": complex_json(r.computed),
        "main_term": complex_json(r.main_term),
        "abs_error": f12(r.abs_error),
        "rel_error": r.rel_error.map(f12).unwrap_or(Value::Null),
        "local_sum": complex_json(r.local_sum),
        "weight_partial": rational_json(&r.weight_partial),
        "integral": complex_json(r.integral),
    })
}

pub fn minor_arc_json(r: &MinorArcReport) -> Value {
    json!({
        "computed_abs": f12(r.computed_abs),
        "bound_value": f12(r.bound_value),
        "ratio": f12(r.ratio),
        "terms": r.terms,
        "bound_expression":
            "cont(g)^6 (log Y)^(e k) X^l (exp(-log Z / log Y) + (J log^(k^2)(J q X) (1/q + Z/X + q Z^k / X^k))^(2^-k))",
        "note": "report only: the minor-arc constants are ineffective",
    })
}

pub fn forbidden_json(x: &ForbiddenSet) -> Value {
    json!({
        "positives": x.positives(),
        "size": x.positives().len(),
        "source": x.source(),
    })
}

pub fn exact_json(n: u64, r: &ExactResult) -> Value {
    json!({
        "N": n,
        "exact": if r.optimal { Value::from(r.size) } else { Value::Null },
        "best_found": r.size,
        "witness": r.witness,
        "witness_lexmin": r.witness_lexmin,
        "nodes": r.nodes,
    })
}

pub fn bounds_json(b: &BoundsReport) -> Value {
    json!({
        "greedy_lower": b.greedy_lower,
        "sumset_upper": b.sumset_upper,
    })
}

pub fn inheritance_json(r: &InheritanceReport) -> Value {
    json!({
        "pass": r.pass,
        "trials": r.trials,
        "violations": r.violations,
        "counterexample": r.counterexample.as_ref().map(|c| json!({
            "trial": c.trial,
            "shift": c.shift,
            "a_prime": c.a_prime,
            "violating_difference": c.violating_difference,
        })),
    })
}

pub fn scaling_json(r: &ScalingReport) -> Value {
    let rows: Vec<Value> = r
        .rows
        .iter()
        .map(|row| {
            json!({
                "N": row.n,
                "D": row.d_value,
                "method": match row.method {
                    crate::diffset::SolverKind::Exact => "exact",
                    crate::diffset::SolverKind::Greedy => "greedy",
                },
            })
        })
        .collect();
    json!({
        "columns": ["N", "D", "method"],
        "rows": rows,
        "fit": r.fit.as_ref().map(|f| json!({
            "c": f12(f.c),
            "mu": f12(f.mu),
            "residual": f12(f.residual),
        })),
    })
}

/// Canonical single-line rendering used for all CLI output.
pub fn to_canonical_string(v: &Value) -> String {
    serde_json::to_string(v).expect("JSON serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    #[test]
    fn twelve_significant_digits() {
        let v = f12(std::f64::consts::PI);
        assert_eq!(v.to_string(), "3.14159265359e+0");
        let w = f12(-4800.0);
        assert_eq!(w.to_string(), "-4.80000000000e+3");
    }

    #[test]
    fn poly_round_trip() {
        let p = parse_polynomial("x^4 - 2*y^4 + 2*x^2*(x+y) + (x+y)^2", None).unwrap();
        let v = poly_json(&p);
        let q = poly_from_json(&v).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn selection_round_trip() {
        let h = parse_polynomial("x^2 + y^2 - 2", None).unwrap();
        let sel =
            RootSelection::integer_root(h, vec![BigInt::from(1), BigInt::from(1)]).unwrap();
        let v = selection_json(&sel);
        let back = selection_from_json(&v).unwrap();
        assert_eq!(back.polynomial(), sel.polynomial());
        assert_eq!(back.rule(), sel.rule());
    }

    #[test]
    fn canonical_order_is_deterministic() {
        let a = json!({"zeta": 1, "alpha": 2, "mid": 3});
        assert_eq!(to_canonical_string(&a), r#"{"alpha":2,"mid":3,"zeta":1}"#);
    }
}
