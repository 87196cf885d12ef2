//! `key=value` overrides read from `--config`.

use std::collections::BTreeMap;
use std::path::Path;

use hecke_core::expsum::{MainTermConsts, MomentCheckOptions};
use hecke_core::specfun::WeightParams;
use hecke_core::trace::TraceCaps;
use hecke_core::zeta::MomentCoefficients;
use hecke_core::{Error, QuadratureSpec, Result};

const KEYS: &[&str] = &[
    "quad.abs_tol",
    "quad.rel_tol",
    "quad.max_subdivisions",
    "moment.a2",
    "moment.a1",
    "moment.a0",
    "weight.delta",
    "weight.c_lemma2",
    "weight.c_lambda",
    "weight.ell",
    "weight.n",
    "weight.l",
    "weight.pole_shift",
    "main.c1",
    "main.c2",
    "main.c0",
    "trace.l_cap",
    "trace.tol",
    "moment_check.d",
    "moment_check.slack",
    "moment_check.tol",
];

#[derive(Debug, Clone, Default)]
pub struct Overrides {
    values: BTreeMap<String, f64>,
}

impl Overrides {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |m: String| Error::Format { message: m, line: Some(i + 1) };
            let (k, v) = line.split_once('=').ok_or_else(|| bad(format!("expected key=value, got {line:?}")))?;
            let k = k.trim();
            if !KEYS.contains(&k) {
                return Err(bad(format!("unknown key {k:?}")));
            }
            let v: f64 = v.trim().parse().map_err(|_| bad(format!("{k}: not a number: {:?}", v.trim())))?;
            if !v.is_finite() {
                return Err(bad(format!("{k}: value must be finite")));
            }
            values.insert(k.to_string(), v);
        }
        let o = Self { values };
        for k in ["quad.abs_tol", "quad.rel_tol", "trace.tol", "moment_check.tol", "moment_check.slack"] {
            if o.get(k).is_some_and(|v| v <= 0.0) {
                return Err(Error::Validation(format!("{k} must be positive")));
            }
        }
        Ok(o)
    }

    fn get(&self, k: &str) -> Option<f64> {
        self.values.get(k).copied()
    }

    fn set(&self, k: &str, slot: &mut f64) {
        if let Some(v) = self.get(k) {
            *slot = v;
        }
    }

    fn set_u32(&self, k: &str, slot: &mut u32) {
        if let Some(v) = self.get(k) {
            *slot = v as u32;
        }
    }

    pub fn quad(&self) -> QuadratureSpec {
        let mut q = QuadratureSpec::default();
        self.set("quad.abs_tol", &mut q.abs_tol);
        self.set("quad.rel_tol", &mut q.rel_tol);
        if let Some(v) = self.get("quad.max_subdivisions") {
            q.max_subdivisions = v as usize;
        }
        q
    }

    pub fn coeffs(&self) -> MomentCoefficients {
        let c = MomentCoefficients::default();
        if ["moment.a2", "moment.a1", "moment.a0"].iter().all(|k| self.get(k).is_none()) {
            return c;
        }
        let g = |k: &str, d: f64| self.get(k).unwrap_or(d);
        MomentCoefficients::with_lower(g("moment.a2", c.a2), g("moment.a1", c.a1), g("moment.a0", c.a0), "config")
    }

    pub fn weight(&self, t: f64, k: f64, g: f64) -> WeightParams {
        let mut p = WeightParams::new(t, k, g);
        self.set("weight.delta", &mut p.delta);
        self.set("weight.c_lemma2", &mut p.c_lemma2);
        self.set("weight.c_lambda", &mut p.c_lambda);
        self.set("weight.pole_shift", &mut p.pole_shift);
        self.set_u32("weight.ell", &mut p.ell);
        self.set_u32("weight.n", &mut p.n);
        self.set_u32("weight.l", &mut p.l);
        p
    }

    pub fn main_consts(&self) -> MainTermConsts {
        let mut c = MainTermConsts::default();
        self.set("main.c1", &mut c.c1);
        self.set("main.c2", &mut c.c2);
        self.set("main.c0", &mut c.c0);
        c
    }

    pub fn trace_caps(&self, l_cap: Option<u64>) -> TraceCaps {
        let mut c = TraceCaps::default();
        if let Some(v) = self.get("trace.l_cap") {
            c.l_cap = v as u64;
        }
        if let Some(l) = l_cap {
            c.l_cap = l;
        }
        self.set("trace.tol", &mut c.tol);
        c
    }

    pub fn moment_check(&self) -> MomentCheckOptions {
        let mut o = MomentCheckOptions { coeffs: self.coeffs(), ..Default::default() };
        self.set("moment_check.d", &mut o.d);
        self.set("moment_check.slack", &mut o.slack);
        self.set("moment_check.tol", &mut o.tol);
        o
    }
}
