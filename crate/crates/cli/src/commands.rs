use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use wblow_core::blowup::{
    build_fan, chart, cone_index, exceptional_info, fan_is_subdivision, pushforward_decomposition,
    pushforward_monomial_check, strict_transform_in_chart, subdivision_samples, valuation_ord_e,
};
use wblow_core::lifting::{chain_report, verify_decomposition_range, verify_generator_lift, LiftInstance};
use wblow_core::notation::{parse_notation, parse_polynomial, Notation};
use wblow_core::quotient::{
    action_lift_check, binomial_relation_2d, invariant_monoid_basis, BinomialRelation,
};
use wblow_core::wideal::{
    count_below, find_stable_b, ideal_generators, product_vs_truncation, sigma_wt_monomial, sigma_wt_poly,
};
use wblow_core::{
    CyclicQuotientType, Error, ExpVec, HyperquotientType, Polynomial, Rat, Result, Singularity, WeightSystem,
};

use crate::{CommandName, Outcome, Provenance, RunSpec};

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

fn params<T: DeserializeOwned>(spec: &RunSpec) -> Result<T> {
    serde_json::from_value(Value::Object(spec.parameters.clone())).map_err(|e| {
        Error::InvalidInstance(format!("parameters for {}: {e}", spec.command.as_str()))
    })
}

fn notation(spec: &RunSpec) -> Result<Notation> {
    let text = spec.target.as_deref().ok_or_else(|| {
        Error::InvalidInstance(format!("{} needs a target singularity", spec.command.as_str()))
    })?;
    parse_notation(text)
}

fn system(spec: &RunSpec, sigma: Option<&[u64]>) -> Result<WeightSystem> {
    let n = notation(spec)?;
    match sigma {
        Some(s) => {
            if s.len() != n.weights.len() {
                return Err(Error::Dimension {
                    expected: n.weights.len(),
                    found: s.len(),
                });
            }
            WeightSystem::new(s, n.m)
        }
        None => n.weight_system(),
    }
}

fn power(name: &str, e: &Rat) -> String {
    if *e == Rat::one() {
        name.to_string()
    } else if e.is_integer() {
        format!("{name}^{e}")
    } else {
        format!("{name}^({e})")
    }
}

fn list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn vectors(xs: &[ExpVec]) -> String {
    xs.iter().map(ExpVec::to_string).collect::<Vec<_>>().join(" ")
}

pub(crate) fn dispatch(spec: &RunSpec) -> Result<Outcome> {
    if !spec.command.needs_target() && spec.target.is_some() {
        return Err(Error::InvalidInstance(format!(
            "{} takes no target",
            spec.command.as_str()
        )));
    }
    match spec.command {
        CommandName::Charts => charts(spec),
        CommandName::Fan => fan(spec),
        CommandName::Ideal => ideal(spec),
        CommandName::Wt => wt(spec),
        CommandName::Pushforward => pushforward(spec),
        CommandName::Transform => transform(spec),
        CommandName::LiftCheck => lift_check(spec),
        CommandName::Chain => chain(spec),
        CommandName::Invariants => invariants(spec),
        CommandName::Example33 => example33(spec),
        CommandName::Truncation => truncation(spec),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NoParams {}

fn charts(spec: &RunSpec) -> Result<Outcome> {
    let NoParams {} = params(spec)?;
    let w = system(spec, None)?;
    let fan = build_fan(&w);
    let mut rows = Vec::new();
    let mut text = format!(
        "weighted blow-up of 1/{}({}) with weights ({})\n",
        w.m(),
        list(w.sigma()),
        list(w.sigma())
    );
    for i in 1..=w.n() {
        let ch = chart(&w, i)?;
        let index = cone_index(&fan, i)?;
        if index != w.sigma()[i - 1] {
            return Err(Error::Consistency(format!(
                "cone {i} has index {index}, chart group has order {}",
                w.sigma()[i - 1]
            )));
        }
        let images: Vec<String> = (0..w.n())
            .map(|j| {
                let row = &ch.substitution[j];
                let factors: Vec<String> = row
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| !e.is_zero())
                    .map(|(k, e)| power(&format!("xb{}", k + 1), e))
                    .collect();
                format!("x{} = {}", j + 1, factors.join("*"))
            })
            .collect();
        text.push_str(&format!(
            "  U{i}: {}  cone index {index}{}\n      {}\n",
            ch.quotient_type,
            if ch.is_smooth() { "  (smooth)" } else { "" },
            images.join(", ")
        ));
        rows.push(json!({
            "index": i,
            "type": ch.quotient_type.to_string(),
            "order": ch.quotient_type.order(),
            "weights": ch.quotient_type.weights(),
            "smooth": ch.is_smooth(),
            "substitution": ch.substitution,
            "cone_index": index,
        }));
    }
    if !fan_is_subdivision(&fan) {
        return Err(Error::Consistency("star subdivision check failed".into()));
    }
    let info = exceptional_info(&w);
    text.push_str(&format!("  {}; {}; M = {}", info.exceptional, info.cartier_generator, info.lcm));
    Ok(Outcome {
        result: json!({
            "sigma": w.sigma(),
            "m": w.m(),
            "lcm": w.lcm(),
            "charts": rows,
            "fan_is_subdivision": true,
            "exceptional": to_value(&info),
        }),
        text,
        verified: true,
        provenance: vec![
            Provenance::computed("chart quotient types and substitutions"),
            Provenance::computed("cone indices in the refined lattice"),
            Provenance::recorded("exceptional divisor is the weighted projective space on the weights"),
            Provenance::recorded(info.vanishing_fact.clone()),
        ],
    })
}

fn fan(spec: &RunSpec) -> Result<Outcome> {
    let NoParams {} = params(spec)?;
    let w = system(spec, None)?;
    let f = build_fan(&w);
    let ok = fan_is_subdivision(&f);
    if !ok {
        return Err(Error::Consistency("star subdivision check failed".into()));
    }
    let names: Vec<String> = (1..=f.n).map(|i| format!("e{i}")).chain(["e".to_string()]).collect();
    let cones: Vec<Vec<&str>> = f
        .cones
        .iter()
        .map(|c| c.iter().map(|&r| names[r].as_str()).collect())
        .collect();
    let indices = (1..=f.n).map(|i| cone_index(&f, i)).collect::<Result<Vec<_>>>()?;
    let e = list(f.e());
    let mut text = format!("e = ({e})\n");
    for (i, c) in cones.iter().enumerate() {
        text.push_str(&format!("  C{}: <{}>  index {}\n", i + 1, c.join(", "), indices[i]));
    }
    text.push_str(&format!("  subdivision check: {ok}"));
    Ok(Outcome {
        result: json!({
            "n": f.n,
            "m": f.m,
            "rays": f.rays,
            "ray_names": names,
            "cones": cones,
            "cone_indices": indices,
            "samples": subdivision_samples(&f).len(),
            "is_subdivision": ok,
        }),
        text,
        verified: true,
        provenance: vec![Provenance::computed("fan, subdivision sample check and cone indices")],
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IdealParams {
    k: Rat,
}

fn ideal(spec: &RunSpec) -> Result<Outcome> {
    let p: IdealParams = params(spec)?;
    let w = system(spec, None)?;
    let ideal = ideal_generators(&w, &p.k)?;
    let below = count_below(&w, &p.k, false)?;
    let invariant_below = count_below(&w, &p.k, true)?;
    let text = format!(
        "I({}) for weights ({}) / {}: {} generator(s)\n  {}\n  monomials of weight < {}: {} ({} invariant)",
        p.k,
        list(w.sigma()),
        w.m(),
        ideal.gens.len(),
        vectors(&ideal.gens),
        p.k,
        below,
        invariant_below
    );
    Ok(Outcome {
        result: json!({
            "ideal": to_value(&ideal),
            "unit": ideal.is_unit(),
            "monomials_below": below,
            "invariant_monomials_below": invariant_below,
        }),
        text,
        verified: true,
        provenance: vec![Provenance::computed("minimal generators by exhaustive box enumeration")],
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WtParams {
    poly: String,
}

fn wt(spec: &RunSpec) -> Result<Outcome> {
    let p: WtParams = params(spec)?;
    let w = system(spec, None)?;
    let f = parse_polynomial(&p.poly, w.n())?;
    let weight = sigma_wt_poly(&f, &w)?;
    let terms = f
        .support()
        .map(|s| Ok(json!({"exponents": s, "weight": sigma_wt_monomial(s, &w)?})))
        .collect::<Result<Vec<_>>>()?;
    let semi = w.quotient_type();
    let class = wblow_core::quotient::semi_invariant_class(&f, &semi).ok();
    let charts = (1..=w.n())
        .map(|i| valuation_ord_e(&f, &w, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome {
        result: json!({
            "polynomial": f.to_string(),
            "weight": weight,
            "terms": terms,
            "chart_orders": charts,
            "class": class,
        }),
        text: format!("wt({f}) = {weight}, equal to the order along E in all {} charts", w.n()),
        verified: true,
        provenance: vec![Provenance::computed("weight and chartwise order along E")],
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PushforwardParams {
    poly: String,
    #[serde(default = "three")]
    a_max: u64,
    #[serde(default)]
    check: bool,
}

fn three() -> u64 {
    3
}

fn pushforward(spec: &RunSpec) -> Result<Outcome> {
    let p: PushforwardParams = params(spec)?;
    let w = system(spec, None)?;
    let f = parse_polynomial(&p.poly, w.n())?;
    let dec = pushforward_decomposition(&f, &w, p.a_max)?;
    let mut text = format!(
        "pullback of ({f} = 0) contains E with multiplicity {}\n",
        dec.multiplicity
    );
    for level in &dec.levels {
        text.push_str(&format!(
            "  pi_* O(-{}E) = I({}): {}\n",
            level.a,
            level.a,
            vectors(&level.ideal.gens)
        ));
    }
    let mut checks = Vec::new();
    let mut verified = true;
    if p.check {
        for a in 0..=p.a_max {
            let c = pushforward_monomial_check(&w, a)?;
            verified &= c.holds();
            checks.push(c);
        }
        text.push_str(&format!(
            "  monomial check on {} level(s): {}",
            checks.len(),
            if verified { "pass" } else { "FAIL" }
        ));
    }
    let info = exceptional_info(&w);
    Ok(Outcome {
        result: json!({
            "decomposition": to_value(&dec),
            "checks": to_value(&checks),
            "exceptional": to_value(&info),
        }),
        text: text.trim_end().to_string(),
        verified,
        provenance: vec![
            Provenance::computed("multiplicity of E and weighted ideals per level"),
            Provenance::recorded("push-forward of O(-aE) is the weighted ideal I(a)"),
            Provenance::recorded(info.vanishing_fact.clone()),
        ],
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TransformParams {
    poly: Option<String>,
    chart: Option<usize>,
    sigma: Option<Vec<u64>>,
}

fn transform(spec: &RunSpec) -> Result<Outcome> {
    let p: TransformParams = params(spec)?;
    let n = notation(spec)?;
    let w = system(spec, p.sigma.as_deref())?;
    let g = match (&p.poly, &n.equation) {
        (Some(text), _) => parse_polynomial(text, w.n())?,
        (None, Some(eq)) => eq.clone(),
        (None, None) => {
            return Err(Error::InvalidInstance(
                "transform needs an equation, in the target or as poly".into(),
            ))
        }
    };
    let indices: Vec<usize> = match p.chart {
        Some(i) => vec![i],
        None => (1..=w.n()).collect(),
    };
    let mut rows = Vec::new();
    let mut text = format!("strict transform of {g}\n");
    for i in indices {
        let st = strict_transform_in_chart(&g, &w, i)?;
        let ch = chart(&w, i)?;
        if st.recover(&ch)? != g {
            return Err(Error::Consistency(format!("chart {i} transform does not invert")));
        }
        text.push_str(&format!(
            "  U{i} ({}): {g} = {} * ({})\n      on E: {}\n",
            ch.quotient_type,
            power(&format!("xb{i}"), &st.multiplicity),
            st.residual,
            st.exceptional_equation
        ));
        rows.push(json!({
            "chart": i,
            "type": ch.quotient_type.to_string(),
            "multiplicity": st.multiplicity,
            "residual": st.residual.to_string(),
            "residual_terms": to_value(&st.residual),
            "exceptional_equation": st.exceptional_equation.to_string(),
            "recovers": true,
        }));
    }
    Ok(Outcome {
        result: json!({"equation": g.to_string(), "sigma": w.sigma(), "m": w.m(), "charts": rows}),
        text: text.trim_end().to_string(),
        verified: true,
        provenance: vec![Provenance::computed("chart substitution, factored transform and inversion")],
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LiftParams {
    sigma_prime: Vec<u64>,
    m: u64,
    a: u64,
    #[serde(default = "six")]
    dmax: u64,
    an: Option<u64>,
    degree_bound: Option<u32>,
}

fn six() -> u64 {
    6
}

fn lift_check(spec: &RunSpec) -> Result<Outcome> {
    let p: LiftParams = params(spec)?;
    let mut inst = LiftInstance::new(&p.sigma_prime, p.m, p.a)?;
    if let Some(an) = p.an {
        inst = inst.with_last_weight(an)?;
    }
    let report = verify_decomposition_range(&inst, p.dmax, p.degree_bound)?;
    let generator_lift = (1..=p.dmax)
        .map(|d| verify_generator_lift(&inst, d))
        .collect::<Result<Vec<_>>>()?;
    let gens_pass = generator_lift.iter().all(|r| r.passed());
    if gens_pass != report.passed() {
        return Err(Error::Consistency(format!(
            "decomposition check says {:?}, generator check says {}",
            report.status,
            if gens_pass { "pass" } else { "fail" }
        )));
    }
    let mut text = format!(
        "lift of ({}) with a = {}: M = {}, a_n = {}{}, weights ({})\n  d = 1..{}: {} ({} points)",
        list(&inst.sigma_prime),
        inst.a,
        inst.big_m,
        inst.a_n,
        if inst.mutated { " (overridden)" } else { "" },
        list(&inst.sigma),
        p.dmax,
        if report.passed() { "pass" } else { "FAIL" },
        report.points_checked
    );
    if let Some(cx) = &report.counterexample {
        text.push_str(&format!("\n  d = {}, s = {}: {}", cx.d, cx.s, cx.explanation));
    }
    let per_d: Vec<Value> = generator_lift
        .iter()
        .map(|r| json!({"d": r.d_range.0, "status": r.status, "counterexample": r.counterexample}))
        .collect();
    Ok(Outcome {
        verified: report.passed(),
        result: json!({
            "instance": to_value(&inst),
            "decomposition": to_value(&report),
            "generator_lift": per_d,
            "status": report.status,
        }),
        text,
        provenance: vec![Provenance::computed("exhaustive monomial check of the lifting sequence")],
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainParams {
    a: Vec<u64>,
    #[serde(default = "four")]
    dmax: u64,
    sigma: Option<Vec<u64>>,
}

fn four() -> u64 {
    4
}

fn chain(spec: &RunSpec) -> Result<Outcome> {
    let p: ChainParams = params(spec)?;
    let n = notation(spec)?;
    let start = n.singularity()?;
    let raw: Option<Vec<u64>> = if n.weights.iter().all(|&x| x > 0) {
        Some(n.weights.iter().map(|&x| x as u64).collect())
    } else {
        None
    };
    let sigma = p.sigma.or(raw);
    let r = chain_report(&start, sigma.as_deref(), &p.a, p.dmax)?;
    let mut text = format!("chain from {} with weights ({})\n", r.start, list(&r.start_sigma));
    for s in &r.stages {
        text.push_str(&format!(
            "  stage {}: a = {}, M = {}, a_n = {} -> {} = {}  {}\n",
            s.stage,
            s.a,
            s.big_m,
            s.a_n,
            s.notation,
            s.quotient_type,
            if s.report.passed() { "pass" } else { "FAIL" }
        ));
    }
    for l in &r.limitations {
        text.push_str(&format!("  note: {l}\n"));
    }
    let verified = r.halted_at.is_none() && r.stages.iter().all(|s| s.section_round_trip);
    Ok(Outcome {
        result: to_value(&r),
        text: text.trim_end().to_string(),
        verified,
        provenance: vec![Provenance::computed("iterated lift types with a lifting check per stage")],
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InvariantParams {
    degree_bound: Option<u64>,
}

fn relation_text(r: &BinomialRelation) -> String {
    let pow = |name: &str, e: u64| if e == 1 { name.to_string() } else { format!("{name}^{e}") };
    format!("{}{} = {}", pow("X", r.alpha), pow("Y", r.beta), pow("Z", r.gamma))
}

fn invariants(spec: &RunSpec) -> Result<Outcome> {
    let p: InvariantParams = params(spec)?;
    let q = match notation(spec)?.singularity()? {
        Singularity::Cyclic(q) => q,
        Singularity::Hyper(h) => h.ambient().clone(),
    };
    let bound = p.degree_bound.unwrap_or(q.order());
    let basis = invariant_monoid_basis(&q, bound)?;
    let relation = if q.dim() == 2 && basis.complete && basis.elements.len() == 3 {
        Some(binomial_relation_2d(&q)?)
    } else {
        None
    };
    let mut text = format!(
        "invariant monoid of {q}: {}{}",
        vectors(&basis.elements),
        if basis.complete { "" } else { " (degree-truncated)" }
    );
    if let Some(r) = &relation {
        text.push_str(&format!("\n  relation {}", relation_text(r)));
    }
    Ok(Outcome {
        result: json!({
            "type": q.to_string(),
            "basis": to_value(&basis),
            "relation": relation.as_ref().map(|r| json!({"relation": to_value(r), "text": relation_text(r), "holds": r.holds()})),
        }),
        text,
        verified: relation.as_ref().is_none_or(BinomialRelation::holds),
        provenance: vec![
            Provenance::computed("Hilbert basis by degree-wise enumeration"),
            Provenance::recorded("minimal invariants have degree at most the group order"),
        ],
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Example33Params {
    r: u64,
    m: u64,
    a: i64,
    #[serde(default = "two")]
    n: u32,
}

fn two() -> u32 {
    2
}

fn example33(spec: &RunSpec) -> Result<Outcome> {
    let p: Example33Params = params(spec)?;
    if p.r == 0 || p.m == 0 || p.n == 0 {
        return Err(Error::InvalidInstance("r, m and n must be positive".into()));
    }
    let rm = p
        .r
        .checked_mul(p.m)
        .ok_or_else(|| Error::Overflow("r m".into()))?;
    let q = CyclicQuotientType::from_signed(rm, &[1, -1])?;
    let basis = invariant_monoid_basis(&q, rm)?;
    let expected = vec![
        ExpVec::new(vec![1, 1])?,
        ExpVec::new(vec![rm as u32, 0])?,
        ExpVec::new(vec![0, rm as u32])?,
    ];
    let mut sorted = basis.elements.clone();
    sorted.sort();
    let mut expected_sorted = expected.clone();
    expected_sorted.sort();
    let basis_ok = basis.complete && sorted == expected_sorted;
    let relation = binomial_relation_2d(&q)?;
    let relation_ok = relation.holds() && relation.alpha == 1 && relation.beta == 1 && relation.gamma == rm;
    let action = action_lift_check(p.r, p.m, p.a)?;

    let g: Polynomial = parse_polynomial(&format!("x1*x2 + x3^{rm} + x4^{}", p.n), 4)?;
    let ambient = CyclicQuotientType::from_signed(p.r, &[p.a, -p.a, 1, 0])?;
    let hyper = HyperquotientType::new(ambient, g, None)?;
    let class = hyper.eigenvalue_class();
    let verified = basis_ok && relation_ok && action.holds && class == 0;
    let text = format!(
        "invariants of {q}: {} {}\n  relation {}: {}\n  lifted action 1/{}({},{}) on (xi^{rm}, eta^{rm}, xi*eta): weights ({}) expected ({}) {}\n  {} has class {}\n  overall: {}",
        vectors(&basis.elements),
        if basis_ok { "as expected" } else { "UNEXPECTED" },
        relation_text(&relation),
        relation.holds(),
        action.lifted_order,
        action.lifted_weights[0],
        action.lifted_weights[1],
        list(&action.induced_weights),
        list(&action.expected_weights),
        action.holds,
        hyper,
        class,
        if verified { "pass" } else { "FAIL" }
    );
    Ok(Outcome {
        result: json!({
            "r": p.r,
            "m": p.m,
            "a": p.a,
            "n": p.n,
            "quotient": q.to_string(),
            "basis": to_value(&basis),
            "basis_matches": basis_ok,
            "relation": to_value(&relation),
            "relation_text": relation_text(&relation),
            "relation_holds": relation_ok,
            "action": to_value(&action),
            "hyperquotient": hyper.to_string(),
            "class": class,
            "holds": verified,
        }),
        text,
        verified,
        provenance: vec![
            Provenance::computed("invariant basis, binomial relation, lifted action and eigenvalue class"),
        ],
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TruncationParams {
    b: Option<Rat>,
    d: Option<u64>,
    dmax: Option<u64>,
    #[serde(default = "eight")]
    search_limit: u64,
}

fn eight() -> u64 {
    8
}

fn truncation(spec: &RunSpec) -> Result<Outcome> {
    let p: TruncationParams = params(spec)?;
    let w = system(spec, None)?;
    let mut result = serde_json::Map::new();
    let mut text = Vec::new();
    let mut verified = true;
    match (&p.b, p.d) {
        (Some(b), Some(d)) => {
            let c = product_vs_truncation(&w, b, d)?;
            text.push(format!(
                "I({b})^{d} {} I({})",
                if c.equal { "=" } else { "is strictly inside" },
                b * &Rat::from(d)
            ));
            if let Some(s) = &c.witness {
                text.push(format!("  witness {s}"));
            }
            result.insert("comparison".into(), to_value(&c));
        }
        (None, None) => {}
        _ => return Err(Error::InvalidInstance("b and d must be given together".into())),
    }
    if let Some(dmax) = p.dmax {
        let stable = find_stable_b(&w, dmax, p.search_limit)?;
        match &stable {
            Some(s) => text.push(format!(
                "I(db) = I(b)^d for 2 <= d <= {dmax} at b = {} ({} M/m)",
                s.b, s.multiple
            )),
            None => {
                verified = false;
                text.push(format!("no stable b among the first {} multiples of M/m", p.search_limit));
            }
        }
        result.insert("stable".into(), to_value(&stable));
        result.insert("search_limit".into(), json!(p.search_limit));
    }
    if result.is_empty() {
        return Err(Error::InvalidInstance("truncation needs b and d, or dmax".into()));
    }
    Ok(Outcome {
        result: Value::Object(result),
        text: text.join("\n"),
        verified,
        provenance: vec![
            Provenance::computed("generators of the power and the truncation with a containment check"),
        ],
    })
}
