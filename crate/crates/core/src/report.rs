//! The reproducible check suite behind `opch report`.

use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::derived::{
    check_di_identities, check_weight_criterion, dim_dervar, nov_convention_check,
};
use crate::di::tau;
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::express::{base_table, express_solver, roundtrip_holds, Expresser};
use crate::properties;
use crate::term::{enumerate_multilinear, Expr};
use crate::variety::VarietyName::{self, *};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub check_id: String,
    pub variety: String,
    pub arity: usize,
    pub expected: Value,
    pub computed: Value,
    pub pass: bool,
    pub millis: u64,
}

/// Data the suite records without asserting anything about it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Observation {
    pub id: String,
    pub variety: String,
    pub arity: usize,
    pub data: Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub tool_version: String,
    pub max_arity: usize,
    pub records: Vec<Record>,
    pub observations: Vec<Observation>,
    pub summary: Summary,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

struct Builder<'a> {
    engine: &'a Engine,
    max_arity: usize,
    records: Vec<Record>,
    observations: Vec<Observation>,
}

impl Builder<'_> {
    fn check(
        &mut self,
        id: String,
        variety: VarietyName,
        arity: usize,
        expected: Value,
        compute: impl FnOnce(&Engine) -> Result<Value>,
    ) -> Result<()> {
        let start = Instant::now();
        let computed = compute(self.engine)?;
        let millis = start.elapsed().as_millis() as u64;
        self.records.push(Record {
            check_id: id,
            variety: variety.to_string(),
            arity,
            pass: expected == computed,
            expected,
            computed,
            millis,
        });
        Ok(())
    }

    fn observe(&mut self, id: String, variety: VarietyName, arity: usize, data: Value) {
        self.observations.push(Observation {
            id,
            variety: variety.to_string(),
            arity,
            data,
        });
    }

    fn arities(&self, range: std::ops::RangeInclusive<usize>) -> Vec<usize> {
        range.filter(|n| *n <= self.max_arity).collect()
    }
}

fn key(v: VarietyName) -> &'static str {
    v.key()
}

/// Run every check up to `max_arity` (at most 4; undecorated BiCom goes to 5
/// once `max_arity` reaches 4).
pub fn run_report(engine: &Engine, max_arity: usize) -> Result<Report> {
    let mut b = Builder {
        engine,
        max_arity: max_arity.min(4),
        records: Vec::new(),
        observations: Vec::new(),
    };

    // Weight −1 part of the commutative associative component.
    for n in b.arities(1..=4) {
        let expected = binom(2 * n as u64 - 2, n as u64 - 1);
        b.check(
            format!("01-com-weight-minus-one/n{n}"),
            Com,
            n,
            json!(expected),
            |e| Ok(json!(e.component(Com, n, -1)?.dim())),
        )?;
    }

    // Undecorated dimensions.
    let mut bicom_plain = b.arities(2..=4);
    if b.max_arity >= 4 {
        bicom_plain.push(5);
    }
    for n in bicom_plain {
        b.check(
            format!("02-plain-dim/bicom/n{n}"),
            BiCom,
            n,
            json!((1u64 << n) - 2),
            |e| Ok(json!(e.dim_variety(BiCom, n)?)),
        )?;
    }
    if b.max_arity >= 3 {
        for (v, d) in [(Alt, 7), (Assos, 7), (As, 6)] {
            b.check(format!("02-plain-dim/{}/n3", key(v)), v, 3, json!(d), |e| {
                Ok(json!(e.dim_variety(v, 3)?))
            })?;
        }
    }

    // Derived dimensions.
    for n in b.arities(2..=4) {
        let n64 = n as u64;
        let expected = ((1u64 << n) - 2) * binom(2 * n64 - 2, n64 - 1);
        b.check(
            format!("03-dervar/bicom/n{n}"),
            BiCom,
            n,
            json!(expected),
            |e| Ok(json!(dim_dervar(e, BiCom, n)?)),
        )?;
    }
    for n in b.arities(2..=3) {
        let n64 = n as u64;
        let expected = factorial(n64) * binom(2 * n64 - 2, n64 - 1);
        b.check(format!("04-dervar/as/n{n}"), As, n, json!(expected), |e| {
            Ok(json!(dim_dervar(e, As, n)?))
        })?;
    }
    if b.max_arity >= 3 {
        let expected = (factorial(3) + 8 - binom(4, 2) - 1) * binom(4, 2);
        b.check(
            "05-dervar/assos/n3".into(),
            Assos,
            3,
            json!(expected),
            |e| Ok(json!(dim_dervar(e, Assos, 3)?)),
        )?;

        let alt3 = engine.dim_variety(Alt, 3)?;
        let bicom3 = engine.dim_variety(BiCom, 3)?;
        let nov3 = engine.component(Com, 3, -1)?.dim();
        b.check(
            "06-alt-nov/alt/n3".into(),
            Alt,
            3,
            json!(alt3 * nov3),
            |e| Ok(json!(dim_dervar(e, Alt, 3)?)),
        )?;
        b.check(
            "06-alt-nov/alt/n3/differs-from-bicom".into(),
            Alt,
            3,
            json!(true),
            |e| Ok(json!(dim_dervar(e, Alt, 3)? != bicom3 * nov3)),
        )?;
        let d = dim_dervar(engine, Alt, 3)?;
        let reading = if d == alt3 * nov3 && d != bicom3 * nov3 {
            "Alt⊗Nov"
        } else if d == bicom3 * nov3 {
            "BiCom⊗Nov"
        } else {
            "neither"
        };
        b.observe(
            "06-alt-nov-reading".into(),
            Alt,
            3,
            json!({
                "dim_dervar": d,
                "alt_times_nov": alt3 * nov3,
                "bicom_times_nov": bicom3 * nov3,
                "supported_reading": reading,
            }),
        );
    }

    // Weight criterion.
    for (v, top) in [(Com, 4), (As, 3), (BiCom, 4), (Alt, 3), (Assos, 3)] {
        for n in b.arities(1..=top) {
            b.check(
                format!("07-criterion/{}/n{n}", key(v)),
                v,
                n,
                json!(true),
                |e| Ok(json!(check_weight_criterion(e, v, n)?.holds)),
            )?;
        }
    }
    for n in b.arities(1..=4) {
        let r = check_weight_criterion(engine, Zinb, n)?;
        b.observe(
            format!("07-zinbiel/n{n}"),
            Zinb,
            n,
            json!({ "rank": r.rank, "dim": r.dim, "holds": r.holds }),
        );
    }

    // Identities of the derived varieties.
    if b.max_arity >= 3 {
        for (d, base) in [(DerAlt, Alt), (DerAssos, Assos), (DerBiCom, BiCom)] {
            let report = check_di_identities(engine, d, base)?;
            for (i, id) in report.identities.iter().enumerate() {
                let vanishes = id.vanishes;
                b.check(
                    format!("08-identities/{}/{}", key(d), i + 1),
                    d,
                    3,
                    json!(true),
                    |_| Ok(json!(vanishes)),
                )?;
            }
            let kernel = 48 - dim_dervar(engine, base, 3)?;
            b.check(
                format!("08-identities/{}/span", key(d)),
                d,
                3,
                json!(kernel),
                |e| Ok(json!(e.di_component(d, 3)?.rank())),
            )?;
            let inside = report.span_in_kernel;
            b.check(
                format!("08-identities/{}/span-in-kernel", key(d)),
                d,
                3,
                json!(true),
                |_| Ok(json!(inside)),
            )?;
        }
    }

    // Roundtrips.
    for (v, top) in [(BiCom, 4), (Alt, 3), (Assos, 3)] {
        for n in b.arities(1..=top) {
            let ambient = enumerate_multilinear(n, -1)?;
            b.check(
                format!("09-roundtrip-solver/{}/n{n}", key(v)),
                v,
                n,
                json!(ambient.len()),
                |e| {
                    let mut ok = 0;
                    for m in &ambient {
                        let f = Expr::from_monomial(m.clone());
                        ok += roundtrip_holds(e, v, &f, &express_solver(e, v, &f)?)? as usize;
                    }
                    Ok(json!(ok))
                },
            )?;
        }
    }
    for (v, top) in [(BiCom, 4), (Alt, 3)] {
        for n in b.arities(1..=top) {
            let ambient = enumerate_multilinear(n, -1)?;
            let mut stats = None;
            b.check(
                format!("09-roundtrip-recursive/{}/n{n}", key(v)),
                v,
                n,
                json!(ambient.len()),
                |e| {
                    let mut ex = Expresser::new(e, v)?;
                    let mut ok = 0;
                    for m in &ambient {
                        let f = Expr::from_monomial(m.clone());
                        let t = ex.express(&f)?;
                        let s = express_solver(e, v, &f)?;
                        let agree = roundtrip_holds(e, v, &tau(&s), &t)?;
                        ok += (agree && roundtrip_holds(e, v, &f, &t)?) as usize;
                    }
                    stats = Some(ex.stats());
                    Ok(json!(ok))
                },
            )?;
            b.observe(
                format!("09-recursive-stats/{}/n{n}", key(v)),
                v,
                n,
                serde_json::to_value(stats.expect("ran"))?,
            );
        }
    }

    // Printed arity-3 tables.
    if b.max_arity >= 3 {
        for v in [BiCom, Alt] {
            for (m, t) in base_table(v).expect("table") {
                let f = Expr::from_monomial(m.clone());
                b.check(
                    format!("10-base-table/{}/{}", key(v), crate::term::format_term(&f)),
                    v,
                    3,
                    json!(true),
                    |e| Ok(json!(roundtrip_holds(e, v, &f, &t)?)),
                )?;
            }
        }
        for (label, ok) in nov_convention_check(engine)? {
            b.check(
                format!("11-nov-convention/{}", label.replace(' ', "-")),
                Nov,
                3,
                json!(true),
                |_| Ok(json!(ok)),
            )?;
        }
    }

    // Property suites.
    let start = Instant::now();
    let outcomes = properties::run_all(properties::DEFAULT_SEED);
    let millis = start.elapsed().as_millis() as u64 / outcomes.len().max(1) as u64;
    for o in &outcomes {
        b.records.push(Record {
            check_id: format!("12-property/{}", o.name.replace(' ', "-")),
            variety: "-".into(),
            arity: 4,
            expected: json!(0),
            computed: json!(o.failures),
            pass: o.pass(),
            millis,
        });
        b.observe(
            format!("12-property-cases/{}", o.name.replace(' ', "-")),
            Com,
            4,
            json!({ "exhaustive": o.exhaustive_cases, "random": o.random_cases }),
        );
    }

    let mut records = b.records;
    records.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    let mut observations = b.observations;
    observations.sort_by(|a, b| a.id.cmp(&b.id));
    let passed = records.iter().filter(|r| r.pass).count();
    Ok(Report {
        schema: SCHEMA,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        max_arity,
        summary: Summary {
            total: records.len(),
            passed,
            failed: records.len() - passed,
        },
        records,
        observations,
    })
}
