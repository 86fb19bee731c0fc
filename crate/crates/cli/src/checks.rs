use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use divcyl_core::analysis::{is_divisible, is_spanning, spectrum};
use divcyl_core::canon::{are_equivalent, canonical_form};
use divcyl_core::classify::{conjecture_report, enumerate_divisible_sets, ClassificationTask, Verdict};
use divcyl_core::code::{is_projective, points_from_code, reinterpret_prime_subfield, weight_distribution};
use divcyl_core::cylinder::{affine_geometry_hyperplane, lift, recognize_cylinder, subfield_embed};
use divcyl_core::geom::bracket;
use divcyl_core::io::parse_matrix;
use divcyl_core::plane::plane_sets;
use divcyl_core::solver::{
    bound_spectrum_value, divisible_system, enumerate_integer_spectra, parametric_solve, plane_line_system,
    standard_system, Constraint, Direction,
};
use divcyl_core::{analysis::count_pencil_distributions, Field, PointMultiset, Space};
use num_rational::BigRational;

use crate::cmd::Ctx;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Cost {
    Fast,
    Stretch,
}

struct Check {
    name: &'static str,
    anchor: &'static str,
    cost: Cost,
    expected: &'static str,
    run: fn(&Path) -> Result<String>,
}

const CHECKS: &[Check] = &[
    Check {
        name: "ce16-weights",
        anchor: "[16,5]_4 non-cylinder code: weight enumerator",
        cost: Cost::Fast,
        expected: "1z^0 + 90z^8 + 840z^12 + 93z^16",
        run: |fx| Ok(weight_distribution(&ce16(fx)?)?.to_string()),
    },
    Check {
        name: "ce16-structure",
        anchor: "[16,5]_4 non-cylinder code: geometry",
        cost: Cost::Fast,
        expected: "projective spanning 4-divisible no-2-cylinder",
        run: |fx| {
            let g = ce16(fx)?;
            let (m, _) = points_from_code(&g)?;
            Ok([
                flag(is_projective(&g), "projective"),
                flag(is_spanning(&m), "spanning"),
                flag(is_divisible(&m, 4)?.divisible, "4-divisible"),
                flag(recognize_cylinder(&m, 1)?.is_none(), "no-2-cylinder"),
            ]
            .join(" "))
        },
    },
    Check {
        name: "ce16-binary",
        anchor: "[16,5]_4 non-cylinder code read over F2",
        cost: Cost::Fast,
        expected: "1z^0 + 30z^8 + 1z^16; AG(4,2)",
        run: |fx| {
            let b = reinterpret_prime_subfield(&ce16(fx)?)?;
            let (m, _) = points_from_code(&b)?;
            let ag = if affine_geometry_hyperplane(&m).is_some() && m.v() == 5 {
                "AG(4,2)"
            } else {
                "not affine"
            };
            Ok(format!("{}; {ag}", weight_distribution(&b)?))
        },
    },
    Check {
        name: "ce16-aut",
        anchor: "[16,5]_4 non-cylinder code: automorphism group",
        cost: Cost::Fast,
        expected: "1935360",
        run: |fx| {
            let (m, _) = points_from_code(&ce16(fx)?)?;
            Ok(canonical_form(&m, false)?.aut_order().to_string())
        },
    },
    Check {
        name: "arc10-weights",
        anchor: "[10,3]_5 code: weight enumerator",
        cost: Cost::Fast,
        expected: "1z^0 + 40z^7 + 60z^8 + 24z^10",
        run: |fx| Ok(weight_distribution(&arc10(fx)?)?.to_string()),
    },
    Check {
        name: "arc10-lines",
        anchor: "[10,3]_5 code: line spectrum (b0,b2,b3,b4)",
        cost: Cost::Fast,
        expected: "(6,15,10,0)",
        run: |fx| {
            let (m, _) = points_from_code(&arc10(fx)?)?;
            let s = spectrum(&m, 1)?;
            Ok(tuple(s.values(&[0, 2, 3, 4])))
        },
    },
    Check {
        name: "arc10-aut",
        anchor: "[10,3]_5 code: automorphism group",
        cost: Cost::Fast,
        expected: "480",
        run: |fx| {
            let (m, _) = points_from_code(&arc10(fx)?)?;
            Ok(canonical_form(&m, false)?.aut_order().to_string())
        },
    },
    Check {
        name: "arc10-unique",
        anchor: "10 points in PG(2,5) with line multiplicities 0,2,3,4",
        cost: Cost::Fast,
        expected: "1 class, equivalent to the [10,3]_5 code",
        run: |fx| {
            let found = plane_sets(5, 10, &[0, 2, 3, 4], false)?;
            let (m, _) = points_from_code(&arc10(fx)?)?;
            let same = found.classes.len() == 1 && are_equivalent(&found.classes[0].canonical, &m, false)?;
            Ok(if same {
                "1 class, equivalent to the [10,3]_5 code".into()
            } else {
                format!("{} class(es)", found.classes.len())
            })
        },
    },
    Check {
        name: "q5-unique-spectrum",
        anchor: "cylinder conjecture for q = 5: spectrum on 0-, 5- and 10-planes",
        cost: Cost::Fast,
        expected: "(11,135,10)",
        run: |_| solutions(&divisible_system(4, 1, 5)?.restrict(&[0, 5, 10]), &[0, 5, 10], &[]),
    },
    Check {
        name: "q7-spectrum",
        anchor: "cylinder conjecture for q = 7: spectrum on 0-, 7-, 14-planes, a21 = 0",
        cost: Cost::Fast,
        expected: "(22,357,21)",
        run: |_| {
            solutions(
                &divisible_system(4, 1, 7)?.restrict(&[0, 7, 14, 21]),
                &[0, 7, 14],
                &[Constraint::Eq(21, 0)],
            )
        },
    },
    Check {
        name: "q7-family",
        anchor: "cylinder conjecture for q = 7: solving for a0,a7,a14",
        cost: Cost::Fast,
        expected: "a0 = 22 - a21; a7 = 357 + 3*a21; a14 = 21 - 3*a21",
        run: |_| family(divisible_system(4, 1, 7)?.restrict(&[0, 7, 14, 21]), &[21]),
    },
    Check {
        name: "q8-family",
        anchor: "cylinder conjecture for q = 8: solving for a0,a8,a16",
        cost: Cost::Fast,
        expected: "a0 = 29 - a24; a8 = 528 + 3*a24; a16 = 28 - 3*a24",
        run: |_| family(divisible_system(4, 1, 8)?.restrict(&[0, 8, 16, 24]), &[24]),
    },
    Check {
        name: "q8-spectrum",
        anchor: "cylinder conjecture for q = 8: spectrum on 0-, 8-, 16-planes, a24 = 0",
        cost: Cost::Fast,
        expected: "(29,528,28)",
        run: |_| {
            solutions(
                &divisible_system(4, 1, 8)?.restrict(&[0, 8, 16, 24]),
                &[0, 8, 16],
                &[Constraint::Eq(24, 0)],
            )
        },
    },
    Check {
        name: "q5-plane-family",
        anchor: "10-plane for q = 5: line spectrum in terms of b0",
        cost: Cost::Fast,
        expected: "a2 = 51 - 6*a0; a3 = -38 + 8*a0; a4 = 18 - 3*a0",
        run: |_| family(plane_line_system(5, 10, &[0, 2, 3, 4])?, &[0]),
    },
    Check {
        name: "plane-q4-n8",
        anchor: "q(q-2)-plane for q = 4: line multiplicities 0,2,3",
        cost: Cost::Fast,
        expected: "infeasible",
        run: |_| solutions(&plane_line_system(4, 8, &[0, 2, 3])?, &[0, 2, 3], &[]),
    },
    Check {
        name: "plane-q4-n12",
        anchor: "q(q-1)-plane for q = 4: line multiplicities 0,3",
        cost: Cost::Fast,
        expected: "infeasible",
        run: |_| solutions(&plane_line_system(4, 12, &[0, 3])?, &[0, 3], &[]),
    },
    Check {
        name: "q7-plane-n21",
        anchor: "q(q-4)-plane for q = 7 with a0 >= 8",
        cost: Cost::Fast,
        expected: "(8,28,21,0)",
        run: |_| {
            solutions(
                &plane_line_system(7, 21, &[0, 3, 4, 5])?,
                &[0, 3, 4, 5],
                &[Constraint::Ge(0, 8)],
            )
        },
    },
    Check {
        name: "q7-14-spectra",
        anchor: "14 points in PG(2,7), line multiplicities 0,2,3,4,5, a5 <= 1",
        cost: Cost::Fast,
        expected: "(10,36,5,5,1) (10,37,2,8,0) (11,30,13,2,1) (11,31,10,5,0) (12,25,18,2,0)",
        run: |_| {
            solutions(
                &standard_system(14, 3, 7, false)?.restrict(&[0, 2, 3, 4, 5]),
                &[0, 2, 3, 4, 5],
                &[Constraint::Le(5, 1)],
            )
        },
    },
    Check {
        name: "lp-bounds",
        anchor: "linear programming bounds on a_(q^r) and a_0",
        cost: Cost::Fast,
        expected: "all bounds hold; equality at (4,1,5): 135 11 6",
        run: |_| lp_grid(),
    },
    Check {
        name: "pencil-q7-a-types",
        anchor: "lines through a 1-point of a 14-set in PG(2,7)",
        cost: Cost::Fast,
        expected: "4^2 3^1 2^5 | 4^1 3^3 2^4 | 3^5 2^3",
        run: |_| Ok(pencils(count_pencil_distributions(7, 14, 1, &[2, 3, 4], &[]))),
    },
    Check {
        name: "pencil-q7-zero-line",
        anchor: "planes through a 0-line of a 21-plane for q = 7",
        cost: Cost::Fast,
        expected: "21^2 7^1 0^5 | 21^1 14^2 0^5 | 21^1 14^1 7^2 0^4 | 21^1 7^4 0^3",
        run: |_| Ok(pencils(count_pencil_distributions(7, 49, 0, &[0, 7, 14, 21], &[21]))),
    },
    Check {
        name: "pencil-q8-zero-point",
        anchor: "lines through a 0-point on a 5-line for q = 8",
        cost: Cost::Fast,
        expected: "5^3 3^3 0^3",
        run: |_| Ok(pencils(count_pencil_distributions(8, 24, 0, &[0, 3, 5], &[5]))),
    },
    Check {
        name: "pencil-q8-six-line",
        anchor: "lines through a 0-point on a 6-line for q = 8",
        cost: Cost::Fast,
        expected: "6^5 5^2 0^2",
        run: |_| Ok(pencils(count_pencil_distributions(8, 40, 0, &[0, 5, 6], &[6]))),
    },
    Check {
        name: "f4-n4-counts",
        anchor: "projective codes over F4 of length 4",
        cost: Cost::Fast,
        expected: "2:1 3:2 4:1",
        run: |_| counts(4, 4, None, false),
    },
    Check {
        name: "f4-n16-counts",
        anchor: "projective 4-divisible codes over F4 of length 16",
        cost: Cost::Fast,
        expected: "3:1 4:2 5:2",
        run: |_| counts(4, 16, Some(1), false),
    },
    Check {
        name: "f5-n5-counts",
        anchor: "projective codes over F5 of length 5",
        cost: Cost::Fast,
        expected: "2:1 3:4 4:3 5:1",
        run: |_| counts(5, 5, None, false),
    },
    Check {
        name: "f2-n4-counts",
        anchor: "projective 2-divisible codes over F2 of length 4",
        cost: Cost::Fast,
        expected: "3:1",
        run: |_| counts(2, 4, Some(1), false),
    },
    Check {
        name: "f3-n9-counts",
        anchor: "projective 3-divisible codes over F3 of length 9",
        cost: Cost::Fast,
        expected: "3:1 4:1",
        run: |_| counts(3, 9, Some(1), false),
    },
    Check {
        name: "conj-3-1-2",
        anchor: "generalized cylinder conjecture (3,1,2)",
        cost: Cost::Fast,
        expected: "true",
        run: |_| verdict(2, 1, 3),
    },
    Check {
        name: "conj-4-1-2",
        anchor: "generalized cylinder conjecture (4,1,2): no spanning set exists",
        cost: Cost::Fast,
        expected: "vacuous",
        run: |_| verdict(2, 1, 4),
    },
    Check {
        name: "conj-4-1-3",
        anchor: "generalized cylinder conjecture (4,1,3)",
        cost: Cost::Fast,
        expected: "true",
        run: |_| verdict(3, 1, 4),
    },
    Check {
        name: "conj-3-1-4",
        anchor: "generalized cylinder conjecture (3,1,4)",
        cost: Cost::Fast,
        expected: "true",
        run: |_| verdict(4, 1, 3),
    },
    Check {
        name: "conj-4-1-4",
        anchor: "generalized cylinder conjecture (4,1,4)",
        cost: Cost::Fast,
        expected: "true",
        run: |_| verdict(4, 1, 4),
    },
    Check {
        name: "conj-5-1-4",
        anchor: "generalized cylinder conjecture (5,1,4)",
        cost: Cost::Fast,
        expected: "false; 1 non-cylinder, equivalent to AG(4,2) over F4 and to the [16,5]_4 code",
        run: |fx| {
            let rep = conjecture_report(4, 1, 5, false)?;
            let bad = rep.non_cylinders();
            let mut out = format!("{}; {} non-cylinder", verdict_str(rep.verdict), bad.len());
            if let [one] = bad.as_slice() {
                let ag = subfield_embed(&ag42(), 2)?;
                let (ce, _) = points_from_code(&ce16(fx)?)?;
                if are_equivalent(&one.class.canonical, &ag, false)? {
                    out += ", equivalent to AG(4,2) over F4";
                }
                if are_equivalent(&one.class.canonical, &ce, false)? {
                    out += " and to the [16,5]_4 code";
                }
            }
            Ok(out)
        },
    },
    Check {
        name: "lift-5-1-4",
        anchor: "lifting the (5,1,4) classes",
        cost: Cost::Fast,
        expected: "2 of 2 classes lift to 16-divisible 64-sets; non-cylinder lift is not a 3-cylinder",
        run: |_| {
            let rep = conjecture_report(4, 1, 5, false)?;
            let mut good = 0;
            let mut bad_lift_ok = false;
            for c in &rep.classes {
                let l = lift(&c.class.canonical)?;
                if l.n() == 64 && is_divisible(&l, 16)?.divisible {
                    good += 1;
                }
                if !c.cylinder {
                    bad_lift_ok = recognize_cylinder(&l, 2)?.is_none();
                }
            }
            Ok(format!(
                "{} of {} classes lift to 16-divisible 64-sets; non-cylinder lift is {}",
                good,
                rep.classes.len(),
                if bad_lift_ok { "not a 3-cylinder" } else { "a 3-cylinder" }
            ))
        },
    },
    Check {
        name: "q7-14-none",
        anchor: "14 points in PG(2,7) with line multiplicities 0,2,3,4,5",
        cost: Cost::Stretch,
        expected: "none",
        run: |_| {
            let r = plane_sets(7, 14, &[0, 2, 3, 4, 5], true)?;
            Ok(if r.classes.is_empty() {
                "none".into()
            } else {
                format!("{} class(es)", r.classes.len())
            })
        },
    },
    Check {
        name: "f5-n25-counts",
        anchor: "projective 5-divisible codes over F5 of length 25",
        cost: Cost::Stretch,
        expected: "3:1 4:4 5:3 6:1",
        run: |_| counts(5, 25, Some(1), true),
    },
    Check {
        name: "ce-6-2-4-unique",
        anchor: "generalized cylinder conjecture (6,2,4): unique non-cylinder",
        cost: Cost::Stretch,
        expected: "false; 1 non-cylinder",
        run: |_| {
            let rep = conjecture_report(4, 2, 6, true)?;
            Ok(format!("{}; {} non-cylinder", verdict_str(rep.verdict), rep.non_cylinders().len()))
        },
    },
];

fn flag(ok: bool, name: &str) -> String {
    if ok {
        name.to_string()
    } else {
        format!("not-{name}")
    }
}

fn tuple<T: ToString>(xs: Vec<T>) -> String {
    format!("({})", xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn read_fixture(fx: &Path, name: &str) -> Result<String> {
    let p = fx.join(name);
    std::fs::read_to_string(&p).with_context(|| format!("missing fixture {}", p.display()))
}

fn ce16(fx: &Path) -> Result<divcyl_core::code::GeneratorMatrix> {
    Ok(parse_matrix(&read_fixture(fx, "ce_16_5_q4.mat")?, None)?)
}

fn arc10(fx: &Path) -> Result<divcyl_core::code::GeneratorMatrix> {
    Ok(parse_matrix(&read_fixture(fx, "arc_10_3_q5.mat")?, None)?)
}

/// `PG(4,2)` minus the hyperplane `x0 = 0`.
fn ag42() -> PointMultiset {
    let s = Space::new(&Field::prime(2).expect("prime"), 5).expect("small");
    PointMultiset::from_points(&s, s.points().filter(|&p| s.point(p)[0] == 1))
}

fn solutions(sys: &divcyl_core::solver::ExactSystem, show: &[u64], extra: &[Constraint]) -> Result<String> {
    let sols = enumerate_integer_spectra(sys, None, extra)?;
    if sols.is_empty() {
        return Ok("infeasible".into());
    }
    let mut rows: Vec<Vec<i64>> = sols.iter().map(|s| s.values(show)).collect();
    rows.sort();
    Ok(rows.into_iter().map(tuple).collect::<Vec<_>>().join(" "))
}

fn family(sys: divcyl_core::solver::ExactSystem, free: &[u64]) -> Result<String> {
    Ok(parametric_solve(&sys, free)?
        .iter()
        .map(|f| f.to_string())
        .collect::<Vec<_>>()
        .join("; "))
}

fn pencils(lists: Vec<Vec<u64>>) -> String {
    lists
        .iter()
        .map(|l| {
            let mut parts = Vec::new();
            let mut i = 0;
            while i < l.len() {
                let j = l[i..].iter().take_while(|&&x| x == l[i]).count();
                parts.push(format!("{}^{}", l[i], j));
                i += j;
            }
            parts.join(" ")
        })
        .collect::<Vec<_>>()
        .join(" | ")
}

fn counts(q: u64, n: u64, r: Option<u32>, stretch: bool) -> Result<String> {
    let mut t = ClassificationTask::projective(q, n, r);
    if stretch {
        t.stretch = true;
        t.v_max = r.map_or(n as usize, |r| q as usize * (r as usize + 1)).min(n as usize);
    }
    let cl = enumerate_divisible_sets(&t)?;
    Ok(cl
        .counts()
        .iter()
        .map(|(d, c)| format!("{d}:{c}"))
        .collect::<Vec<_>>()
        .join(" "))
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::True => "true",
        Verdict::False => "false",
        Verdict::Vacuous => "vacuous",
    }
}

fn verdict(q: u64, r: u32, v: usize) -> Result<String> {
    Ok(verdict_str(conjecture_report(q, r, v, false)?.verdict).into())
}

fn int(x: i128) -> BigRational {
    BigRational::from_integer(x.into())
}

/// The three closed-form bounds over the grid, and equality at (4,1,5).
fn lp_grid() -> Result<String> {
    let mut failures = Vec::new();
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        for r in 1u32..=3 {
            for v in r + 2..=r + 5 {
                let sys = divisible_system(v, r, q)?;
                let qr = q.pow(r);
                let t = (q as i128).pow(v - r - 1);
                let lo_qr = bound_spectrum_value(&sys, qr, Direction::Min);
                let hi_0 = bound_spectrum_value(&sys, 0, Direction::Max);
                let lo_0 = bound_spectrum_value(&sys, 0, Direction::Min);
                match (lo_qr, hi_0, lo_0) {
                    (Ok(a), Ok(b), Ok(c)) => {
                        let f1 = int(bracket(v, q) as i128 - (t - q as i128 + 1));
                        let f2 = BigRational::new((t - q as i128 + 2).into(), 2.into());
                        let f3 = BigRational::new((t - 1).into(), (q as i128 - 1).into());
                        if a < f1 || b > f2 || c < f3 {
                            failures.push(format!("({v},{r},{q})"));
                        }
                    }
                    (Err(divcyl_core::Error::Infeasible), _, _) => {}
                    (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return Err(anyhow!("({v},{r},{q}): {e}")),
                }
            }
        }
    }
    if !failures.is_empty() {
        return Ok(format!("bounds fail at {}", failures.join(" ")));
    }
    let sys = divisible_system(4, 1, 5)?;
    let vals = [
        bound_spectrum_value(&sys, 5, Direction::Min)?,
        bound_spectrum_value(&sys, 0, Direction::Max)?,
        bound_spectrum_value(&sys, 0, Direction::Min)?,
    ];
    Ok(format!(
        "all bounds hold; equality at (4,1,5): {}",
        vals.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    ))
}

fn default_fixtures() -> PathBuf {
    let local = PathBuf::from("fixtures");
    if local.join("ce_16_5_q4.mat").exists() {
        local
    } else {
        PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures"))
    }
}

pub fn verify(ctx: &Ctx, name: Option<&str>, stretch: bool, list: bool, fixtures: Option<PathBuf>) -> Result<u8> {
    if list {
        for c in CHECKS {
            let tag = if c.cost == Cost::Stretch { " (stretch)" } else { "" };
            println!("{:<22} {}{tag}", c.name, c.anchor);
        }
        return Ok(0);
    }
    let selected: Vec<&Check> = match name {
        Some(n) => match CHECKS.iter().find(|c| c.name == n) {
            Some(c) => vec![c],
            None => bail!("unknown check '{n}'; see --list"),
        },
        None => CHECKS.iter().filter(|c| stretch || c.cost == Cost::Fast).collect(),
    };
    let fx = fixtures.unwrap_or_else(default_fixtures);
    let mut reports = Vec::new();
    let mut worst = 0u8;
    for c in selected {
        let t = Instant::now();
        let res = (c.run)(&fx);
        let secs = t.elapsed().as_secs_f64();
        let (status, actual) = match res {
            Ok(a) if a == c.expected => ("PASS", a),
            Ok(a) => {
                worst = worst.max(1);
                ("FAIL", a)
            }
            Err(e) => {
                worst = 2;
                ("ERROR", format!("{e:#}"))
            }
        };
        if !ctx.json() {
            println!("{status:<5} {:<22} {:>8.2}s  {}", c.name, secs, c.anchor);
            if status != "PASS" {
                println!("      expected: {}\n      actual:   {}", c.expected, actual);
            }
        }
        reports.push(json!({
            "check": c.name,
            "anchor": c.anchor,
            "status": status,
            "expected": c.expected,
            "actual": actual,
        }));
    }
    if ctx.json() {
        println!("{}", serde_json::to_string_pretty(&Value::Array(reports))?);
    }
    Ok(worst)
}
