//! One line per acceptance criterion; exits nonzero when any fails.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use nilcoh::catalog::{find, load_catalog, nilpotent_six};
use nilcoh::coeff::{parse_scalar, ParameterContext, Poly, Polynomial, Rational, Scalar};
use nilcoh::cohomology::{build_complex, parametric_betti, CohomologyTable, Theory};
use nilcoh::exterior::parse_element;
use nilcoh::groebner::{
    groebner_basis, ideal_membership, is_groebner, normal_form, MonomialOrder, DEFAULT_PAIR_BUDGET,
};
use nilcoh::lcs::{
    apply_normalization, closed_one_forms, lcs_families, EquivalenceProblem, EquivalenceVerdict,
};
use nilcoh::lie::{parse_sage_dict, parse_salamon, StructureConstants};
use nilcoh::linalg::Matrix;
use nilcoh::parametric::{parametric_rank, rank_strata, ConditionSet};

type Outcome = Result<String, String>;
type Criterion = Box<dyn FnOnce(&mut ChaCha8Rng) -> Outcome>;

fn bin(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_nilcoh"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    ))
}

fn within(t: Duration, limit_s: f64) -> Result<(), String> {
    if t.as_secs_f64() < limit_s {
        Ok(())
    } else {
        Err(format!("took {:.2}s, limit {limit_s}s", t.as_secs_f64()))
    }
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, expected {want:?}"))
    }
}

fn totals(t: &CohomologyTable) -> Vec<usize> {
    t.totals()
}

fn c1_betti() -> Outcome {
    let start = Instant::now();
    let (code, out) = bin(&["betti", "g_{3.1}+3g_1", "--format", "json"])?;
    let t = start.elapsed();
    expect("exit code", code, 0)?;
    let v: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let dims: Vec<u64> = (0..=6)
        .map(|k| v["dims"][k.to_string()].as_u64().unwrap_or(u64::MAX))
        .collect();
    expect("dims", dims, vec![1, 5, 11, 14, 11, 5, 1])?;
    within(t, 1.0)?;
    Ok(format!("(1,5,11,14,11,5,1) in {:.3}s", t.as_secs_f64()))
}

const POINCARE: [(&str, &str); 26] = [
    ("g_{6.N2}", "x^6 + 2*x^5 + 3*x^4 + 4*x^3 + 3*x^2 + 2*x + 1"),
    ("g_{6.N19}", "x^6 + 2*x^5 + 3*x^4 + 4*x^3 + 3*x^2 + 2*x + 1"),
    ("g_{6.N11}", "x^6 + 2*x^5 + 4*x^4 + 6*x^3 + 4*x^2 + 2*x + 1"),
    (
        "g_{6.N18}^{1}",
        "x^6 + 2*x^5 + 4*x^4 + 6*x^3 + 4*x^2 + 2*x + 1",
    ),
    (
        "g_{6.N18}^{-1}",
        "x^6 + 2*x^5 + 4*x^4 + 6*x^3 + 4*x^2 + 2*x + 1",
    ),
    ("g_{6.N20}", "x^6 + 2*x^5 + 3*x^4 + 4*x^3 + 3*x^2 + 2*x + 1"),
    ("g_{6.N6}", "x^6 + 3*x^5 + 6*x^4 + 8*x^3 + 6*x^2 + 3*x + 1"),
    ("g_{6.N7}", "x^6 + 3*x^5 + 6*x^4 + 8*x^3 + 6*x^2 + 3*x + 1"),
    ("g_{6.N1}", "x^6 + 3*x^5 + 6*x^4 + 8*x^3 + 6*x^2 + 3*x + 1"),
    ("g_{6.N3}", "x^6 + 3*x^5 + 8*x^4 + 12*x^3 + 8*x^2 + 3*x + 1"),
    ("g_{6.N17}", "x^6 + 3*x^5 + 5*x^4 + 6*x^3 + 5*x^2 + 3*x + 1"),
    ("g_{6.N15}", "x^6 + 3*x^5 + 5*x^4 + 6*x^3 + 5*x^2 + 3*x + 1"),
    (
        "g_{5.6}+g_1",
        "x^6 + 3*x^5 + 5*x^4 + 6*x^3 + 5*x^2 + 3*x + 1",
    ),
    (
        "g_{5.2}+g_1",
        "x^6 + 3*x^5 + 5*x^4 + 6*x^3 + 5*x^2 + 3*x + 1",
    ),
    ("g_{6.N9}", "x^6 + 3*x^5 + 5*x^4 + 6*x^3 + 5*x^2 + 3*x + 1"),
    ("g_{6.N8}", "x^6 + 3*x^5 + 5*x^4 + 6*x^3 + 5*x^2 + 3*x + 1"),
    ("g_{6.N16}", "x^6 + 3*x^5 + 4*x^4 + 4*x^3 + 4*x^2 + 3*x + 1"),
    ("g_{6.N10}", "x^6 + 3*x^5 + 5*x^4 + 6*x^3 + 5*x^2 + 3*x + 1"),
    (
        "g_{4.1}+2g_1",
        "x^6 + 4*x^5 + 7*x^4 + 8*x^3 + 7*x^2 + 4*x + 1",
    ),
    (
        "g_{5.5}+g_1",
        "x^6 + 4*x^5 + 7*x^4 + 8*x^3 + 7*x^2 + 4*x + 1",
    ),
    ("g_{6.N4}", "x^6 + 4*x^5 + 8*x^4 + 10*x^3 + 8*x^2 + 4*x + 1"),
    ("2g_{3.1}", "x^6 + 4*x^5 + 8*x^4 + 10*x^3 + 8*x^2 + 4*x + 1"),
    (
        "g_{5.1}+g_1",
        "x^6 + 4*x^5 + 9*x^4 + 12*x^3 + 9*x^2 + 4*x + 1",
    ),
    ("g_{6.N5}", "x^6 + 4*x^5 + 8*x^4 + 10*x^3 + 8*x^2 + 4*x + 1"),
    (
        "g_{3.1}+3g_1",
        "x^6 + 5*x^5 + 11*x^4 + 14*x^3 + 11*x^2 + 5*x + 1",
    ),
    ("6g_1", "x^6 + 6*x^5 + 15*x^4 + 20*x^3 + 15*x^2 + 6*x + 1"),
];

fn c2_poincare() -> Outcome {
    let start = Instant::now();
    let (code, out) = bin(&["poincare", "--all", "--format", "text"])?;
    let t = start.elapsed();
    expect("exit code", code, 0)?;
    let printed: BTreeMap<&str, &str> = out.lines().filter_map(|l| l.split_once(": ")).collect();
    let mut wrong = Vec::new();
    for (name, poly) in POINCARE {
        if printed.get(name) != Some(&poly) {
            wrong.push(format!("{name} -> {:?}", printed.get(name)));
        }
    }
    if !wrong.is_empty() {
        return Err(wrong.join("; "));
    }
    let names: Vec<&str> = printed.keys().copied().collect();
    let lines: Vec<&str> = out
        .lines()
        .filter_map(|l| l.split_once(": ").map(|x| x.0))
        .collect();
    expect("alphabetical output", lines, names)?;
    within(t, 10.0)?;
    Ok(format!("26/26 polynomials in {:.3}s", t.as_secs_f64()))
}

fn c3_bott_chern_aeppli() -> Outcome {
    let start = Instant::now();
    let e = find("h8").map_err(|e| e.to_string())?.ok_or("h8 missing")?;
    let b = e.complex[0]
        .input
        .resolve(&e.structure)
        .map_err(|e| e.to_string())?;
    let bc = b.cohomology(Theory::BottChern).map_err(|e| e.to_string())?;
    let a = b.cohomology(Theory::Aeppli).map_err(|e| e.to_string())?;
    let t = start.elapsed();
    expect("Bott-Chern", totals(&bc), vec![1, 4, 10, 16, 14, 6, 1])?;
    expect("Aeppli", totals(&a), vec![1, 6, 14, 16, 10, 4, 1])?;
    within(t, 5.0)?;
    Ok(format!(
        "BC (1,4,10,16,14,6,1), A (1,6,14,16,10,4,1) in {:.3}s",
        t.as_secs_f64()
    ))
}

fn c4_dolbeault_h11() -> Outcome {
    let start = Instant::now();
    let e = find("h11")
        .map_err(|e| e.to_string())?
        .ok_or("h11 missing")?;
    let mut seen = Vec::new();
    for a in &e.complex {
        let b = a.input.resolve(&e.structure).map_err(|e| e.to_string())?;
        let t = b
            .parametric_cohomology(Theory::Dolbeault, &a.base)
            .map_err(|e| e.to_string())?;
        let g = t.generic().ok_or("no generic stratum")?;
        seen.push((a.label.clone(), totals(g)));
    }
    let t = start.elapsed();
    for (label, got) in &seen {
        expect(
            &format!("generic totals on {label}"),
            got.clone(),
            vec![1, 3, 5, 6, 5, 3, 1],
        )?;
    }
    within(t, 10.0)?;
    Ok(format!(
        "(1,3,5,6,5,3,1) on both branches in {:.3}s",
        t.as_secs_f64()
    ))
}

/// The printed Sage dictionary for the family, taken literally, on each branch of `|B − 1|`.
fn c4_listing_dictionary() -> Outcome {
    let gens: Vec<String> = [
        "varphi0",
        "varphi1",
        "varphi2",
        "barvarphi0",
        "barvarphi1",
        "barvarphi2",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let ctx = ParameterContext::from_names(&["B"]).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for abs in ["(B - 1)", "(1 - B)"] {
        let dict = format!(
            "{{(0,3): varphi1 - barvarphi1, (0,1): varphi2, (0,4): B * varphi2, \
             (1,3): {abs} * varphi2 - B * barvarphi2, (3,4): barvarphi2, (0,4): -{abs} * barvarphi2}}"
        );
        let s = parse_sage_dict(&dict, &gens, &ctx).map_err(|e| e.to_string())?;
        let c = build_complex(&s.coboundary()).map_err(|e| e.to_string())?;
        let base = ConditionSet::new()
            .with_inequation(&Scalar::param(0).to_poly().unwrap())
            .with_inequation(&(Scalar::param(0).to_poly().unwrap() - Poly::one()));
        let t = parametric_betti(&c, &base).map_err(|e| e.to_string())?;
        let g = t.generic().ok_or("no generic stratum")?;
        out.push(totals(g));
    }
    for g in &out {
        expect(
            "literal dictionary totals",
            g.clone(),
            vec![1, 3, 5, 6, 5, 3, 1],
        )?;
    }
    Ok("the literal dictionary (repeated key (0,4), full d) gives (1,3,5,6,5,3,1) on both branches".into())
}

fn r4() -> StructureConstants {
    parse_salamon("(14+24,24+34,34,0)", 4).unwrap()
}

fn c5_lcs() -> Outcome {
    let start = Instant::now();
    let s = r4();
    let lee = closed_one_forms(&s).map_err(|e| e.to_string())?;
    expect("Lee branches", lee.forms.len(), 1)?;
    let lctx = &lee.solution.ctx;
    expect("theta", lee.forms[0].1.render(lctx), "r1*e3".to_string())?;
    let cl = lcs_families(&s).map_err(|e| e.to_string())?;
    let ctx = &cl.ctx;
    let lcs: Vec<_> = cl.families.iter().filter(|f| !f.symplectic).collect();
    expect("lcs branches", lcs.len(), 2)?;
    let r1 = Scalar::param(ctx.index_of("r1").ok_or("no r1")?)
        .to_poly()
        .unwrap();
    let generic = lcs.iter().find(|f| {
        f.conditions
            .inequations()
            .iter()
            .any(|p| *p == &r1 + &Scalar::int(2).to_poly().unwrap())
    });
    let generic = generic.ok_or("no branch with r1 + 2 != 0")?;
    expect("r1 != -2 degenerate", generic.degenerate, true)?;
    let special = lcs
        .iter()
        .find(|f| !f.degenerate)
        .ok_or("no nondegenerate branch")?;
    expect("special theta", special.theta.render(ctx), "-2*e3".into())?;
    expect(
        "Omega",
        special.omega.render(ctx),
        "r5*e0^e3 + r4*e1^e2 + r3*e1^e3 + r2*e2^e3".into(),
    )?;
    expect(
        "condition",
        special.render_condition(ctx),
        "2*r4*r5 != 0".into(),
    )?;
    let rows = [
        ["1/r5", "0", "0", "0"],
        ["0", "1/r5", "0", "0"],
        ["0", "0", "1/r5", "0"],
        ["0", "r2/r4", "-r3/r4", "1"],
    ];
    let m = Matrix::from_fn(4, 4, |i, j| parse_scalar(rows[i][j], ctx).unwrap());
    let g = apply_normalization(&s, special, &m, ctx).map_err(|e| e.to_string())?;
    expect(
        "normalized Omega",
        g.omega.render(ctx),
        "e0^e3 + r4/r5^2*e1^e2".into(),
    )?;
    let t = start.elapsed();
    within(t, 5.0)?;
    Ok(format!("theta = r1*e3; r1 = -2 branch nondegenerate iff 2*r4*r5 != 0; normal form e0^e3 + r4/r5^2*e1^e2 in {:.3}s", t.as_secs_f64()))
}

const REFERENCE_BASIS: [&str; 14] = [
    "a21^2 + a31*sigma2 - a20",
    "a32*sigma2 + a21",
    "a00 - 1",
    "a01",
    "a02",
    "a03",
    "a10 - a21",
    "a11 - 1",
    "a12",
    "a13",
    "a22 - 1",
    "a23",
    "a33 - 1",
    "sigma1 - sigma2",
];

fn c6_groebner() -> Outcome {
    let start = Instant::now();
    let pctx = ParameterContext::from_names(&["sigma1", "sigma2"]).unwrap();
    let p = EquivalenceProblem {
        algebra: r4(),
        theta: parse_element("-2*e3", 4, &pctx).unwrap(),
        omega1: parse_element("e0^e3 + sigma1*e1^e2", 4, &pctx).unwrap(),
        omega2: parse_element("e0^e3 + sigma2*e1^e2", 4, &pctx).unwrap(),
        ctx: pctx,
    };
    let ideal = p.automorphism_ideal().map_err(|e| e.to_string())?;
    let order = MonomialOrder::degrevlex();
    let ours = ideal.reduced_basis(&order).map_err(|e| e.to_string())?;
    let ring = &ideal.ring;
    let parse = |t: &str| parse_scalar(t, ring).unwrap().to_poly().unwrap();
    let target = parse("sigma1 - sigma2");
    if !ours.contains(&target) {
        return Err("sigma1 - sigma2 not in the reduced basis".into());
    }
    let member = ideal_membership(&target, &ideal.nonzero(), &order, DEFAULT_PAIR_BUDGET)
        .map_err(|e| e.to_string())?;
    expect("membership of sigma1 - sigma2", member, true)?;
    let reference: Vec<Poly> = REFERENCE_BASIS.iter().map(|t| parse(t)).collect();
    expect(
        "printed basis is a Groebner basis",
        is_groebner(&reference, &order),
        true,
    )?;
    let left = reference
        .iter()
        .filter(|f| !normal_form(f, &ours, &order).is_zero())
        .count();
    let right = ours
        .iter()
        .filter(|f| !normal_form(f, &reference, &order).is_zero())
        .count();
    expect("printed elements not reducing to zero", left, 0)?;
    expect("computed elements not reducing to zero", right, 0)?;
    match p.are_equivalent().map_err(|e| e.to_string())? {
        EquivalenceVerdict::Inequivalent { witness, .. } => expect("witness", witness, target)?,
        EquivalenceVerdict::Undecided { .. } => return Err("no parameter-only witness".into()),
    }
    let t = start.elapsed();
    within(t, 60.0)?;
    Ok(format!(
        "{} elements, mutually reduces with the printed 14, sigma1 - sigma2 in ideal, {:.3}s",
        ours.len(),
        t.as_secs_f64()
    ))
}

fn c7_unimodular() -> Outcome {
    let start = Instant::now();
    let (code, out) = bin(&["unimodular", "r_4"])?;
    expect("exit code", code, 0)?;
    expect(
        "r_4",
        out.trim(),
        "false; witness d(e0^e1^e2) = 3*e0^e1^e2^e3",
    )?;
    let mut count = 0;
    for e in load_catalog().map_err(|e| e.to_string())? {
        if e.nilpotent {
            let v = e.structure.unimodularity_check();
            if !v.holds {
                return Err(format!("{} reported non-unimodular", e.name));
            }
            count += 1;
        }
    }
    let t = start.elapsed();
    within(t, 1.0)?;
    Ok(format!(
        "r_4 witness 3*e0^e1^e2^e3; {count} nilpotent entries unimodular; {:.3}s",
        t.as_secs_f64()
    ))
}

fn bracket_jacobi(n: usize, c: &[(usize, usize, usize, Rational)]) -> bool {
    let mut br = vec![vec![vec![Rational::zero(); n]; n]; n];
    for (m, j, k, v) in c {
        br[*j][*k][*m] += v;
        br[*k][*j][*m] -= v;
    }
    let bracket = |x: &[Rational], y: &[Rational]| -> Vec<Rational> {
        let mut out = vec![Rational::zero(); n];
        for a in 0..n {
            for b in 0..n {
                let s = &x[a] * &y[b];
                if s.is_zero() {
                    continue;
                }
                for m in 0..n {
                    out[m] += &s * &br[a][b][m];
                }
            }
        }
        out
    };
    let unit = |i: usize| -> Vec<Rational> {
        (0..n)
            .map(|k| {
                if k == i {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect()
    };
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (x, y, z) = (unit(i), unit(j), unit(k));
                let a = bracket(&bracket(&x, &y), &z);
                let b = bracket(&bracket(&y, &z), &x);
                let c = bracket(&bracket(&z, &x), &y);
                if (0..n).any(|m| !(&a[m] + &b[m] + &c[m]).is_zero()) {
                    return false;
                }
            }
        }
    }
    true
}

fn c8a_jacobi(rng: &mut ChaCha8Rng) -> Outcome {
    let mut holds = 0;
    for trial in 0..500 {
        let n = rng.gen_range(1..=4);
        let mut s = StructureConstants::abelian(n, ParameterContext::new());
        let mut consts = Vec::new();
        let density = if trial % 2 == 0 { 0.2 } else { 0.5 };
        for m in 0..n {
            for j in 0..n {
                for k in j + 1..n {
                    if rng.gen_bool(density) {
                        let v: i64 = *[-2, -1, 1, 2].choose(rng).unwrap();
                        s.add(m, j, k, Scalar::int(v)).map_err(|e| e.to_string())?;
                        consts.push((m, j, k, Rational::from_integer(v.into())));
                    }
                }
            }
        }
        let oracle = bracket_jacobi(n, &consts);
        let square_zero = build_complex(&s.coboundary()).is_ok();
        let verdict = s.jacobi_check().holds;
        if oracle != square_zero || oracle != verdict {
            return Err(format!(
                "trial {trial}: bracket {oracle}, d^2 = 0 {square_zero}, check {verdict}: {}",
                s.render_images()
            ));
        }
        holds += usize::from(oracle);
    }
    if holds == 0 || holds == 500 {
        return Err(format!("degenerate sample: {holds} of 500 satisfy Jacobi"));
    }
    Ok(format!(
        "500 structures agree ({holds} Lie, {} not)",
        500 - holds
    ))
}

fn c8b_duality() -> Outcome {
    let mut checked = 0;
    for e in load_catalog().map_err(|e| e.to_string())? {
        let t =
            nilcoh::cohomology::de_rham(&e.structure).map_err(|x| format!("{}: {x}", e.name))?;
        let b = totals(&t);
        if t.euler_characteristic() != 0 {
            return Err(format!("{}: chi = {}", e.name, t.euler_characteristic()));
        }
        if e.structure.unimodularity_check().holds {
            let rev: Vec<usize> = b.iter().rev().copied().collect();
            expect(&format!("{} Poincare duality", e.name), b.clone(), rev)?;
            checked += 1;
        }
    }
    Ok(format!(
        "chi = 0 on all entries; duality on {checked} unimodular entries"
    ))
}

fn dual(t: &CohomologyTable, m: usize) -> BTreeMap<(usize, usize), usize> {
    t.bigraded
        .as_ref()
        .unwrap()
        .iter()
        .map(|(&(p, q), &d)| ((m - p, m - q), d))
        .collect()
}

fn c8c_bc_aeppli() -> Outcome {
    let h8 = find("h8").unwrap().unwrap();
    let b = h8.complex[0]
        .input
        .resolve(&h8.structure)
        .map_err(|e| e.to_string())?;
    let bc = b.cohomology(Theory::BottChern).map_err(|e| e.to_string())?;
    let a = b.cohomology(Theory::Aeppli).map_err(|e| e.to_string())?;
    expect(
        "h8 BC vs dual Aeppli",
        bc.bigraded.clone().unwrap(),
        dual(&a, 3),
    )?;
    let h11 = find("h11").unwrap().unwrap();
    let mut pairs = 0;
    for att in &h11.complex {
        let b = att
            .input
            .resolve(&h11.structure)
            .map_err(|e| e.to_string())?;
        let bc = b
            .parametric_cohomology(Theory::BottChern, &att.base)
            .map_err(|e| e.to_string())?;
        let a = b
            .parametric_cohomology(Theory::Aeppli, &att.base)
            .map_err(|e| e.to_string())?;
        for (c1, t1) in &bc.strata {
            for (c2, t2) in &a.strata {
                if c1.and(c2).is_consistent().map_err(|e| e.to_string())? {
                    expect(
                        &format!("h11 {} strata", att.label),
                        t1.bigraded.clone().unwrap(),
                        dual(t2, 3),
                    )?;
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!(
        "h8 and {pairs} overlapping h11 strata satisfy h_BC^(p,q) = h_A^(3-p,3-q)"
    ))
}

fn rank_oracle(rows: Vec<Vec<Rational>>) -> usize {
    let mut a = rows;
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[r][c];
                let pivot = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot).skip(c) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

fn real_coeffs(p: &Poly) -> Polynomial<Rational> {
    p.try_map_coeffs(|c| c.im.is_zero().then(|| c.re.clone()))
        .expect("real polynomial")
}

fn divisors(n: &num_bigint::BigInt) -> Vec<num_bigint::BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = num_bigint::BigInt::one();
    while d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
        }
        d += 1;
    }
    out
}

/// Rational roots of a univariate polynomial in variable 0.
fn rational_roots(p: &Polynomial<Rational>) -> Vec<Rational> {
    let coeffs: BTreeMap<u32, Rational> = p
        .coeffs_in(0)
        .into_iter()
        .map(|(k, c)| (k, c.as_constant().unwrap()))
        .collect();
    let mut roots = Vec::new();
    let low = *coeffs.keys().next().unwrap();
    if low > 0 {
        roots.push(Rational::zero());
    }
    let lcm = coeffs.values().fold(num_bigint::BigInt::one(), |acc, c| {
        num_integer::Integer::lcm(&acc, c.denom())
    });
    let ints: BTreeMap<u32, num_bigint::BigInt> = coeffs
        .iter()
        .map(|(k, c)| (*k, (c * Rational::from_integer(lcm.clone())).to_integer()))
        .collect();
    let (a0, an) = (&ints[&low], ints.values().last().unwrap());
    for num in divisors(a0) {
        for den in divisors(an) {
            for sign in [1, -1] {
                let x = Rational::new(num.clone() * sign, den.clone());
                if p.evaluate(|c| c.clone(), |_| x.clone()).is_zero() && !roots.contains(&x) {
                    roots.push(x);
                }
            }
        }
    }
    roots
}

fn sample_points(rng: &mut ChaCha8Rng, cs: &ConditionSet, want: usize) -> Vec<Rational> {
    let at = |x: &Rational| cs.satisfied_at(&BTreeMap::from([(0, x.clone())]));
    if let Some(e) = cs.equations().first() {
        return rational_roots(&real_coeffs(e))
            .into_iter()
            .filter(at)
            .take(want)
            .collect();
    }
    let mut out = Vec::new();
    for _ in 0..50 * want {
        let x = Rational::new(
            rng.gen_range(-40i64..=40).into(),
            rng.gen_range(1i64..=7).into(),
        );
        if at(&x) && !out.contains(&x) {
            out.push(x);
        }
        if out.len() == want {
            break;
        }
    }
    out
}

fn c8d_parametric_rank(rng: &mut ChaCha8Rng) -> Outcome {
    let mut checks = 0;
    let mut special = 0;
    for trial in 0..20 {
        let mut m = Matrix::from_fn(4, 4, |_, _| Scalar::int(0));
        for i in 0..4 {
            for j in 0..4 {
                let a = rng.gen_range(-2i64..=2);
                let b = if rng.gen_bool(0.4) {
                    rng.gen_range(-2i64..=2)
                } else {
                    0
                };
                m.set(i, j, Scalar::int(a) + Scalar::int(b) * Scalar::param(0));
            }
        }
        if trial % 4 == 0 {
            let r0: Vec<Scalar> = m.row(0).to_vec();
            for (j, x) in r0.into_iter().enumerate() {
                m.set(3, j, x * Scalar::int(2));
            }
        }
        let numeric = |x: &Rational| -> usize {
            let rows = (0..4)
                .map(|i| {
                    (0..4)
                        .map(|j| {
                            real_coeffs(&m.get(i, j).to_poly().unwrap())
                                .evaluate(|c| c.clone(), |_| x.clone())
                        })
                        .collect()
                })
                .collect();
            rank_oracle(rows)
        };
        let minors = parametric_rank(&m).map_err(|e| e.to_string())?;
        for (r, list) in &minors.strata {
            for cs in list {
                let pts = sample_points(rng, cs, 25);
                special += usize::from(!cs.equations().is_empty() && !pts.is_empty());
                for x in pts {
                    expect(
                        &format!("trial {trial} minors rank at t = {x}"),
                        numeric(&x),
                        *r,
                    )?;
                    checks += 1;
                }
            }
        }
        let tree = rank_strata(&m, &ConditionSet::new()).map_err(|e| e.to_string())?;
        for (cs, r) in &tree {
            for x in sample_points(rng, cs, 25) {
                expect(
                    &format!("trial {trial} elimination rank at t = {x}"),
                    numeric(&x),
                    *r,
                )?;
                checks += 1;
            }
        }
        for _ in 0..25 {
            let x = Rational::new(
                rng.gen_range(-40i64..=40).into(),
                rng.gen_range(1i64..=7).into(),
            );
            let point = BTreeMap::from([(0, x.clone())]);
            let hits = tree
                .iter()
                .filter(|(cs, _)| cs.satisfied_at(&point))
                .count();
            expect(&format!("trial {trial} strata covering t = {x}"), hits, 1)?;
        }
    }
    Ok(format!(
        "{checks} point checks on 20 matrices, {special} special strata with rational points"
    ))
}

fn random_quadratic(rng: &mut ChaCha8Rng, vars: usize) -> Polynomial<Rational> {
    let mut monos = vec![nilcoh::coeff::Monomial::one()];
    for i in 0..vars {
        monos.push(nilcoh::coeff::Monomial::var(i));
        for j in i..vars {
            monos.push(nilcoh::coeff::Monomial::var(i).mul(&nilcoh::coeff::Monomial::var(j)));
        }
    }
    loop {
        let mut p = Polynomial::zero();
        for m in &monos {
            if rng.gen_bool(0.3) {
                p.add_term(
                    m.clone(),
                    Rational::from_integer(rng.gen_range(-3i64..=3).into()),
                );
            }
        }
        if p.total_degree() == 2 {
            return p;
        }
    }
}

fn c8e_groebner_uniqueness(rng: &mut ChaCha8Rng) -> Outcome {
    let orders = [
        MonomialOrder::degrevlex(),
        MonomialOrder::lex(),
        MonomialOrder::deglex(),
    ];
    for k in 0..20 {
        let vars = rng.gen_range(1..=4);
        let count = rng.gen_range(1..=3);
        let gens: Vec<Polynomial<Rational>> =
            (0..count).map(|_| random_quadratic(rng, vars)).collect();
        let order = &orders[k % orders.len()];
        let g = groebner_basis(&gens, order, DEFAULT_PAIR_BUDGET).map_err(|e| e.to_string())?;
        expect(
            &format!("ideal {k} Groebner property"),
            is_groebner(&g, order),
            true,
        )?;
        for f in &gens {
            expect(
                &format!("ideal {k} generator reduces"),
                normal_form(f, &g, order).is_zero(),
                true,
            )?;
        }
        for _ in 0..3 {
            let mut h = gens.clone();
            h.shuffle(rng);
            let c = Rational::from_integer(rng.gen_range(1i64..=5).into());
            h[0] = h[0].scale(&c);
            if h.len() > 1 {
                let sum = h[0].clone() + h[1].clone();
                h.push(sum);
            }
            let g2 = groebner_basis(&h, order, DEFAULT_PAIR_BUDGET).map_err(|e| e.to_string())?;
            expect(&format!("ideal {k} reduced basis after reshuffle"), &g2, &g)?;
        }
    }
    Ok(
        "20 ideals, reduced basis identical under reshuffling, rescaling and redundant generators"
            .into(),
    )
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2024);
    let criteria: Vec<(&str, Criterion)> = vec![
        ("1 de Rham of g_{3.1}+3g_1", Box::new(|_| c1_betti())),
        ("2 Poincare sweep", Box::new(|_| c2_poincare())),
        (
            "3 Bott-Chern/Aeppli on h8",
            Box::new(|_| c3_bott_chern_aeppli()),
        ),
        (
            "4 h11 Dolbeault generic totals",
            Box::new(|_| c4_dolbeault_h11()),
        ),
        ("5 lcs pipeline on r_4", Box::new(|_| c5_lcs())),
        ("6 Groebner equivalence on r_4", Box::new(|_| c6_groebner())),
        ("7 unimodularity", Box::new(|_| c7_unimodular())),
        ("8a d^2 = 0 iff Jacobi", Box::new(c8a_jacobi)),
        ("8b Poincare duality and chi", Box::new(|_| c8b_duality())),
        (
            "8c Bott-Chern/Aeppli duality",
            Box::new(|_| c8c_bc_aeppli()),
        ),
        (
            "8d parametric rank vs numeric",
            Box::new(c8d_parametric_rank),
        ),
        ("8e Groebner uniqueness", Box::new(c8e_groebner_uniqueness)),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f(&mut rng) {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    match c4_listing_dictionary() {
        Ok(detail) => println!("NOTE criterion 4 companion: {detail}"),
        Err(why) => println!("NOTE criterion 4 companion did not reproduce: {why}"),
    }
    if nilpotent_six().map(|v| v.len()).unwrap_or(0) != 26 {
        failed += 1;
        println!("FAIL catalog: expected 26 six-dimensional nilpotent entries");
    }
    println!("{failed} failed");
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
