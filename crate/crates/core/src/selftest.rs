//! Seeded batteries that exercise the deciders against the oracles at run
//! time. Each battery counts failures and keeps the first one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::funcfield::{global_as_test, Place, RatFunc};
use crate::gf2k::Gf2k;
use crate::globaldec::{global_isotropic, isometric, similar_decide};
use crate::localinv::{local_profile, local_similar, SymbolPair};
use crate::oracle::{albert_check, check_reciprocity, fuzz_normalization_with, search_isotropic, FuzzConfig};
use crate::polyring::Poly;
use crate::qform::{direct_sum, invariants, scale, support_places, QuadraticForm};
use crate::random::{random_form, random_nonzero_ratfunc, random_place, random_ratfunc};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BatteryResult {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl BatteryResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub passed: bool,
    pub batteries: Vec<BatteryResult>,
}

struct Battery {
    result: BatteryResult,
}

impl Battery {
    fn new(name: &str) -> Self {
        Battery {
            result: BatteryResult {
                name: name.into(),
                trials: 0,
                failures: 0,
                first_failure: None,
            },
        }
    }

    fn record(&mut self, outcome: std::result::Result<(), String>) {
        self.result.trials += 1;
        if let Err(msg) = outcome {
            self.result.failures += 1;
            self.result.first_failure.get_or_insert(msg);
        }
    }
}

fn expect(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn field_for(i: usize) -> Gf2k {
    Gf2k::new(1 + (i % 2) as u32).expect("small field")
}

fn scaling(rng: &mut ChaCha8Rng, trials: usize) -> BatteryResult {
    let mut b = Battery::new("scaling");
    for i in 0..trials {
        let field = field_for(i);
        let q = random_form(rng, field, 1 + i % 6, 2);
        let a = random_nonzero_ratfunc(rng, field, 2);
        b.record((|| {
            let g = scale(&a, &q).map_err(|e| e.to_string())?;
            let d = similar_decide(&q, &g).map_err(|e| e.to_string())?;
            expect(d.verdict, || format!("{q} not similar to its scaling by {a}"))?;
            if let Some(c) = &d.factor {
                let moved = scale(c, &g).map_err(|e| e.to_string())?;
                let ok = isometric(&q, &moved).map_err(|e| e.to_string())?.verdict;
                expect(ok, || format!("factor {c} for {q} fails verification"))?;
            }
            Ok(())
        })());
    }
    b.result
}

fn reciprocity(rng: &mut ChaCha8Rng, trials: usize) -> BatteryResult {
    let mut b = Battery::new("reciprocity");
    for i in 0..trials {
        let field = field_for(i);
        let x = random_ratfunc(rng, field, 4);
        let y = random_nonzero_ratfunc(rng, field, 4);
        b.record((|| {
            let p = SymbolPair::new(x.clone(), y.clone()).map_err(|e| e.to_string())?;
            let ok = check_reciprocity(&p).map_err(|e| e.to_string())?;
            expect(ok, || format!("({x}, {y}] violates reciprocity"))
        })());
    }
    b.result
}

fn normalization(seed: u64, trials: usize) -> BatteryResult {
    let mut b = Battery::new("normalization");
    for k in [1, 2] {
        let cfg = FuzzConfig {
            field: Gf2k::new(k).expect("small field"),
            entry_degree: 2,
            ..FuzzConfig::default()
        };
        let report = fuzz_normalization_with(seed ^ k as u64, trials.div_ceil(2), cfg);
        b.result.trials += report.trials;
        b.result.failures += report.failed;
        if let Some(f) = report.first_failure {
            b.result.first_failure.get_or_insert(f.detail);
        }
    }
    b.result
}

fn tables(rng: &mut ChaCha8Rng, trials: usize) -> BatteryResult {
    let mut b = Battery::new("local tables");
    for i in 0..trials {
        let field = field_for(i);
        let n = 1 + i % 6;
        let q = random_form(rng, field, n, 2);
        let v = random_place(rng, field, 2);
        b.record((|| {
            let p = local_profile(&q, &v).map_err(|e| e.to_string())?;
            let ok = p.anis_rank % 2 == n % 2 && p.anis_rank <= 4 && (n < 5 || p.witt_index >= 1);
            expect(ok, || format!("{q} at {v}: anisotropic rank {}", p.anis_rank))
        })());
    }
    b.result
}

fn albert(rng: &mut ChaCha8Rng, trials: usize) -> BatteryResult {
    let mut b = Battery::new("albert");
    for i in 0..trials {
        let field = field_for(i);
        let xs: Vec<RatFunc> = (0..4).map(|_| random_nonzero_ratfunc(rng, field, 2)).collect();
        b.record(expect(albert_check(&xs[0], &xs[1], &xs[2], &xs[3]), || {
            format!("albert form of {{{}, {}}} and {{{}, {}}}", xs[0], xs[1], xs[2], xs[3])
        }));
    }
    b.result
}

fn negatives() -> BatteryResult {
    let f2 = Gf2k::f2();
    let r = |num: &[u8], den: &[u8]| RatFunc::new(Poly::from_bits(f2, num), Poly::from_bits(f2, den)).expect("nonzero");
    let twisted = QuadraticForm::binary(r(&[1, 1], &[1]), r(&[1], &[0, 1, 1]));
    let pole = QuadraticForm::binary(r(&[1], &[1]), r(&[1], &[0, 1]));
    let h = |n| QuadraticForm::hyperbolic(f2, n);
    let cases = [
        (h(2), direct_sum(&twisted, &h(1)).expect("even")),
        (h(1), pole.clone()),
        (h(2), direct_sum(&twisted, &pole).expect("even")),
    ];
    let mut b = Battery::new("negative certificates");
    for (f, g) in &cases {
        b.record((|| {
            let d = similar_decide(f, g).map_err(|e| e.to_string())?;
            expect(!d.verdict, || format!("{f} reported similar to {g}"))?;
            let ob = d.obstruction.ok_or_else(|| format!("{f} vs {g}: no obstruction"))?;
            let replayed = ob.replay(f, Some(g)).map_err(|e| e.to_string())?;
            expect(replayed, || format!("{f} vs {g}: obstruction does not replay"))
        })());
    }
    b.result
}

fn isotropy(rng: &mut ChaCha8Rng, trials: usize) -> BatteryResult {
    let mut b = Battery::new("isotropy");
    let f2 = Gf2k::f2();
    for i in 0..trials {
        let q = random_form(rng, f2, 2 + i % 2, 1);
        b.record((|| {
            let d = global_isotropic(&q).map_err(|e| e.to_string())?;
            match search_isotropic(&q, 2) {
                Ok(w) => expect(d.verdict, || format!("{q} decided anisotropic, zero at {:?}", w.coords)),
                Err(_) => Ok(()),
            }
        })());
    }
    b.result
}

fn agreement(rng: &mut ChaCha8Rng, trials: usize) -> BatteryResult {
    let mut b = Battery::new("local agreement");
    for i in 0..trials {
        let field = field_for(i);
        let n = 1 + i % 5;
        let f = random_form(rng, field, n, 2);
        let g = if rng.gen_bool(0.5) {
            scale(&random_nonzero_ratfunc(rng, field, 2), &f).expect("nonzero scalar")
        } else {
            random_form(rng, field, n, 2)
        };
        let mut places = support_places(&f, &g);
        for _ in 0..5 {
            places.insert(random_place(rng, field, 3));
        }
        b.record((|| {
            let d = similar_decide(&f, &g).map_err(|e| e.to_string())?;
            let local = places
                .iter()
                .map(|v: &Place| local_similar(&f, &g, v))
                .collect::<crate::Result<Vec<bool>>>()
                .map_err(|e| e.to_string())?
                .into_iter()
                .all(|x| x);
            let arf = n % 2 == 1 || global_as_test(&(&invariants(&f).1 + &invariants(&g).1)).is_some();
            expect(d.verdict == (local && arf), || {
                format!("{f} vs {g}: decider {}", d.verdict)
            })
        })());
    }
    b.result
}

/// Runs every battery with `trials` samples each (the fixed negative
/// certificates always run in full).
pub fn run_selftest(seed: u64, trials: usize) -> SelftestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let batteries = vec![
        scaling(&mut rng, trials),
        reciprocity(&mut rng, trials),
        normalization(seed, trials),
        tables(&mut rng, trials),
        albert(&mut rng, trials),
        negatives(),
        isotropy(&mut rng, trials),
        agreement(&mut rng, trials),
    ];
    SelftestReport {
        seed,
        passed: batteries.iter().all(BatteryResult::passed),
        batteries,
    }
}
