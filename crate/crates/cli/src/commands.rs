use std::path::PathBuf;

use num_complex::Complex64;
use serde_json::json;

use hecke_core::arithmetic::{
    binary_divisor_sum, build_divisor_table, dirichlet_residual, divisor_summatory, floor_quotient_sum, kloosterman,
    weil_bound, DivisorTable,
};
use hecke_core::cache::{load_divisor_table, save_divisor_table};
use hecke_core::expsum;
use hecke_core::motohashi::{psi_minus, psi_plus, GaussianKernel, Kernel, WeightKernel};
use hecke_core::report::ExpSumResult;
use hecke_core::saddle::{self, PhaseSpec};
use hecke_core::spectral_data::{hecke_central_value, load_spectral_dataset, SpectralDataset};
use hecke_core::specfun::WeightParams;
use hecke_core::trace::kuznetsov_check;
use hecke_core::zeta::{self, ZetaSample};
use hecke_core::{Error, Result};

use crate::config::Overrides;
use crate::output::{num, to_json, Output};
use crate::{Command, DivSide, PsiKind, Window, ZetaAlgo};

pub struct Ctx {
    pub ov: Overrides,
    pub spectral: Option<PathBuf>,
    pub cache: Option<PathBuf>,
}

impl Ctx {
    fn dataset(&self) -> Result<SpectralDataset> {
        let p = self.spectral.as_ref().ok_or_else(|| Error::Validation("this command needs --spectral <path>".into()))?;
        if !p.is_file() {
            return Err(Error::Validation(format!("spectral dataset {} not found", p.display())));
        }
        load_spectral_dataset(p)
    }

    /// A table covering `limit`, read from or written to the cache directory.
    fn table(&self, limit: usize) -> Result<DivisorTable> {
        let Some(dir) = &self.cache else {
            return build_divisor_table(limit);
        };
        let path = dir.join(format!("divisors-{limit}.bin"));
        if path.is_file() {
            let t = load_divisor_table(&path)?;
            if t.limit() >= limit {
                return Ok(t);
            }
        }
        let t = build_divisor_table(limit)?;
        std::fs::create_dir_all(dir)?;
        save_divisor_table(&t, &path)?;
        Ok(t)
    }

    /// Only δ and the Lemma 2 constant enter the central values.
    fn central_params(&self) -> WeightParams {
        self.ov.weight(1.0, 1.0, 1.0)
    }
}

fn expsum_output(r: &ExpSumResult) -> Output {
    Output::new(vec!["re", "im", "abs_err", "terms"], to_json(r)).row(vec![
        num(r.value.re),
        num(r.value.im),
        num(r.abs_err),
        r.terms.to_string(),
    ])
}

fn zeta_row(s: &ZetaSample) -> Vec<String> {
    vec![
        num(s.t),
        num(s.value.re),
        num(s.value.im),
        num(s.value.norm()),
        to_json(&s.method).as_str().unwrap_or("").to_string(),
        num(s.err_bound),
    ]
}

fn c_cells(z: Complex64) -> [String; 2] {
    [num(z.re), num(z.im)]
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn window_sum(ctx: &Ctx, w: &Window) -> Result<ExpSumResult> {
    expsum::spectral_s_m(&ctx.dataset()?, w.m, w.k, w.k2, w.t, &ctx.central_params())
}

pub fn dispatch(ctx: &Ctx, cmd: &Command) -> Result<Output> {
    let quad = ctx.ov.quad();
    quad.validate()?;
    match *cmd {
        Command::Sieve { limit } => {
            let t = ctx.table(limit)?;
            let s = divisor_summatory(&t, limit)?;
            let h = floor_quotient_sum(limit as u64);
            let r = dirichlet_residual(&t, limit)?;
            let j = json!({ "limit": limit, "sum_d": s, "hyperbola": h, "dirichlet_residual": r });
            Ok(Output::new(vec!["limit", "sum_d", "hyperbola", "dirichlet_residual"], j).row(vec![
                limit.to_string(),
                s.to_string(),
                h.to_string(),
                num(r),
            ]))
        }
        Command::Divsum { x, f } => {
            let v = binary_divisor_sum(&ctx.table(x + f)?, x, f)?;
            Ok(Output::new(vec!["value"], json!({ "x": x, "f": f, "value": v })).row(vec![v.to_string()]))
        }
        Command::Kloosterman { m, n, l } => {
            if l == 0 {
                return Err(Error::Validation("ℓ must be positive".into()));
            }
            let s = kloosterman(m, n, l);
            let b = weil_bound(&ctx.table(l as usize)?, m, n, l)?;
            let j = json!({ "m": m, "n": n, "l": l, "value": s, "weil_bound": b });
            Ok(Output::new(vec!["value", "weil_bound"], j).row(vec![num(s), num(b)]))
        }
        Command::Zeta { t, t_end, step, method } => {
            let end = t_end.unwrap_or(t);
            if !(step > 0.0) || end < t {
                return Err(Error::Validation("need step > 0 and t_end ≥ t".into()));
            }
            let count = ((end - t) / step).floor() as usize + 1;
            let eval = |u: f64| match method {
                ZetaAlgo::Em => zeta::zeta_critical(u),
                ZetaAlgo::Rs => zeta::zeta_riemann_siegel(u),
            };
            let samples: Vec<ZetaSample> = (0..count).map(|i| eval(t + step * i as f64)).collect::<Result<_>>()?;
            let mut out = Output::new(vec!["t", "re", "im", "abs", "method", "err_bound"], to_json(&samples));
            for s in &samples {
                out = out.row(zeta_row(s));
            }
            Ok(out)
        }
        Command::Moment4 { t } => Ok(expsum_output(&zeta::fourth_moment(t, &quad)?)),
        Command::E2 { t } => {
            let c = ctx.ov.coeffs();
            let v = zeta::e2(t, &c, &quad)?;
            let j = json!({ "t": t, "e2": v, "coefficients": to_json(&c) });
            Ok(Output::new(vec!["t", "e2", "provenance"], j).row(vec![num(t), num(v), c.provenance.clone()]))
        }
        Command::SmoothedMoment { t, g } => Ok(expsum_output(&zeta::smoothed_fourth_moment(t, g, &quad)?)),
        Command::HeckeCentral => {
            let ds = ctx.dataset()?;
            let p = ctx.central_params();
            let vals: Vec<f64> = ds.forms.iter().map(|f| hecke_central_value(f, &p)).collect::<Result<_>>()?;
            let mut out = Output::new(vec!["id", "kappa", "alpha", "h_half"], serde_json::Value::Null);
            let mut j = Vec::new();
            for (f, v) in ds.forms.iter().zip(&vals) {
                j.push(json!({ "id": f.source_id, "kappa": f.kappa, "alpha": f.alpha, "h_half": v }));
                out = out.row(vec![f.source_id.clone(), num(f.kappa), num(f.alpha), num(*v)]);
            }
            out.json = serde_json::Value::Array(j);
            Ok(out)
        }
        Command::Specsum { ref w } => Ok(expsum_output(&window_sum(ctx, w)?)),
        Command::Divside { k, t, kind, power } => {
            let c = ctx.ov.main_consts();
            let r = match kind {
                DivSide::Main => {
                    let top = (3.0 * k).floor().max(0.0);
                    let need = (c.c2 * t * top / k).floor() + top + 1.0;
                    expsum::divisor_side_main(k, t, &c, &ctx.table(need as usize)?)?
                }
                DivSide::Theorem2 => {
                    let need = (c.c2 * t / k).floor() + 2.0;
                    expsum::theorem2_rhs(power, k, t, &c, &ctx.table(need as usize)?)?
                }
            };
            Ok(expsum_output(&r))
        }
        Command::TraceCheck { m, n, width, l_cap } => {
            if !(width > 0.0) {
                return Err(Error::Validation("--width must be positive".into()));
            }
            let ds = ctx.dataset()?;
            let f = GaussianKernel::centered(width);
            let r = kuznetsov_check(&ds, m, n, &f, &ctx.ov.trace_caps(l_cap), &quad)?;
            let cols = vec![
                "m", "n", "discrete", "continuous", "delta", "kloosterman", "lhs", "rhs", "residual", "relative_residual",
                "error_budget", "complete",
            ];
            let row = vec![
                m.to_string(),
                n.to_string(),
                num(r.discrete),
                num(r.continuous),
                num(r.delta_term),
                num(r.kloosterman_sum),
                num(r.lhs),
                num(r.rhs),
                num(r.residual),
                num(r.relative_residual()),
                num(r.error_budget()),
                r.is_complete().to_string(),
            ];
            Ok(Output::new(cols, to_json(&r)).row(row))
        }
        Command::MomentCheck { t, g } => {
            let ds = ctx.dataset()?;
            let r = expsum::moment_check(&ds, t, g, &ctx.central_params(), &ctx.ov.moment_check(), &quad)?;
            let verdict = to_json(&r.verdict).as_str().unwrap_or("").to_string();
            Ok(Output::new(vec!["lhs", "rhs", "difference", "envelope", "verdict"], to_json(&r)).row(vec![
                num(r.lhs),
                num(r.rhs),
                num(r.difference),
                num(r.envelope),
                verdict,
            ]))
        }
        Command::Meansquare { ref w, bump } => {
            let ds = ctx.dataset()?;
            let r = expsum::mean_square_s(&ds, w.m, w.k, w.k2, w.t, &ctx.central_params(), &quad, bump)?;
            Ok(expsum_output(&r))
        }
        Command::Saddle { t, x, g } => {
            let p = PhaseSpec::theorem1(t, x, g)?;
            let k1 = saddle::k1(t, x);
            let (a, b) = (k1 * (-3f64).exp(), k1 * 3f64.exp());
            let q = saddle::oscillatory_quad(&p, a, b, &quad)?;
            let s = saddle::saddle_eval(&p, a, b)?;
            let l = saddle::stationary_phase_leading(&p, a, b)?;
            let j = json!({
                "t": t, "x": x, "g": g, "k1": k1, "interval": [a, b],
                "quadrature": to_json(&q), "saddle": to_json(&s), "saddle_rel_err": rel(s, q.value),
                "stationary_phase": to_json(&l), "stationary_phase_rel_err": rel(l, q.value),
            });
            let cols = vec!["k1", "quad_re", "quad_im", "quad_err", "saddle_re", "saddle_im", "saddle_rel_err", "sp_re", "sp_im", "sp_rel_err"];
            let [qr, qi] = c_cells(q.value);
            let [sr, si] = c_cells(s);
            let [lr, li] = c_cells(l);
            Ok(Output::new(cols, j).row(vec![
                num(k1),
                qr,
                qi,
                num(q.abs_err),
                sr,
                si,
                num(rel(s, q.value)),
                lr,
                li,
                num(rel(l, q.value)),
            ]))
        }
        Command::Psi { x, kind, t, k, g, width, center } => {
            let h: Box<dyn Kernel> = match (width, center) {
                (Some(w), Some(c)) => Box::new(GaussianKernel::pair(c, w)),
                _ => Box::new(WeightKernel::new(ctx.ov.weight(t, k, g))),
            };
            let v = match kind {
                PsiKind::Plus => psi_plus(x, h.as_ref(), &quad)?,
                PsiKind::Minus => psi_minus(x, h.as_ref(), &quad)?,
            };
            let [vr, vi] = c_cells(v.value);
            let [cr, ci] = c_cells(v.check);
            let j = json!({
                "x": x, "value": to_json(&v.value), "abs_err": v.abs_err,
                "check": to_json(&v.check), "check_err": v.check_err,
            });
            Ok(Output::new(vec!["x", "re", "im", "abs_err", "check_re", "check_im", "check_err"], j).row(vec![
                num(x),
                vr,
                vi,
                num(v.abs_err),
                cr,
                ci,
                num(v.check_err),
            ]))
        }
    }
}
