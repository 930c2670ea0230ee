use serde::Serialize;

use crate::bootstrap::{
    bootstrap_bands, bootstrap_ensemble, bootstrap_table, sensitivity_drop_max_up, skewness,
    SensitivityArm,
};
use crate::dataset::{dedupe, format_float, load_dataset_file, summarize, ShockDataset};
use crate::error::{Error, Result};
use crate::hugoniot::{default_up_grid, posterior_pv_band, resolve_rho0, rh_transform, InitialState};
use crate::regression::{
    band, credible_region_ellipse, fit_least_squares, parameter_names, posterior_informative, posterior_noninformative,
    posterior_table, prior_marginal, sample_beta, sigma2_posterior_summary, BandKind, FitResult, NIGPrior,
    ParameterSummary, PosteriorNIG,
};
use crate::stats::rng::RngState;
use crate::svg::{emit_svg, histogram, Plot, Series};
use crate::validation::{grid_posterior_oracle, posterior_predictive_check, GridSpec};

use super::config::{Format, RunConfig};
use super::output::{numeric_csv, read_columns, text_csv, OutputSet};

const ELLIPSE_POINTS: usize = 200;
const HISTOGRAM_BINS: usize = 60;

/// Dataset, fit and posterior shared by the subcommands.
pub struct Context {
    pub cfg: RunConfig,
    pub ds: ShockDataset,
    pub removed_duplicates: usize,
    pub fit: FitResult,
    pub prior: Option<NIGPrior>,
    pub rng: RngState,
}

impl Context {
    pub fn new(cfg: RunConfig) -> Result<Self> {
        let path = cfg.data.as_ref().ok_or_else(|| Error::Config("no dataset given".into()))?;
        let raw = load_dataset_file(path, cfg.material.as_deref())?;
        let (ds, removed_duplicates) = if cfg.dedupe { dedupe(&raw)? } else { (raw, 0) };
        let fit = fit_least_squares(&ds, cfg.degree)?;
        let prior = cfg.prior.as_ref().map(|p| p.resolve()).transpose()?;
        if let Some(p) = &prior {
            if p.degree() != cfg.degree {
                return Err(Error::Config(format!(
                    "prior has {} coefficients but degree {} needs {}",
                    p.beta0.len(),
                    cfg.degree,
                    cfg.degree + 1
                )));
            }
        }
        let rng = RngState::new(cfg.seed);
        Ok(Context {
            cfg,
            ds,
            removed_duplicates,
            fit,
            prior,
            rng,
        })
    }

    pub fn material(&self) -> &str {
        self.ds.material()
    }

    pub fn posterior(&self) -> Result<PosteriorNIG> {
        match &self.prior {
            Some(p) => posterior_informative(&self.ds, p),
            None => posterior_noninformative(&self.fit),
        }
    }

    fn names(&self) -> Vec<String> {
        parameter_names(self.cfg.degree)
    }

    fn up_grid(&self) -> Vec<f64> {
        default_up_grid(&self.ds, self.cfg.up_grid)
    }
}

fn lower(names: &[String]) -> Vec<String> {
    names.iter().map(|n| n.to_lowercase()).collect()
}

fn table_bytes(rows: &[ParameterSummary], format: Format) -> (String, Vec<u8>) {
    match format {
        Format::Csv => (
            "csv".into(),
            text_csv(
                &["material", "parameter", "mean", "sd", "lo", "hi", "units"],
                rows.iter().map(|r| {
                    vec![
                        r.material.clone(),
                        r.parameter.clone(),
                        format_float(r.mean),
                        format_float(r.sd),
                        format_float(r.lo),
                        format_float(r.hi),
                        r.units.clone(),
                    ]
                }),
            ),
        ),
        Format::Json => {
            let mut b = serde_json::to_vec_pretty(rows).expect("tables serialize");
            b.push(b'\n');
            ("json".into(), b)
        }
    }
}

fn add_svg(out: &mut OutputSet, cfg: &RunConfig, name: &str, plot: impl FnOnce(&OutputSet) -> Result<Plot>) -> Result<()> {
    if cfg.emit_svg {
        let p = plot(out)?;
        out.add(name, emit_svg(&p).into_bytes());
    }
    Ok(())
}

fn csv_of<'a>(out: &'a OutputSet, name: &str) -> &'a [u8] {
    out.get(name).expect("csv written before its plot")
}

pub fn dataset_info(ctx: &Context, out: &mut OutputSet) {
    #[derive(Serialize)]
    struct Info<'a> {
        summary: crate::dataset::DatasetSummary,
        removed_duplicates: usize,
        source: &'a str,
    }
    let source = ctx.cfg.data.as_ref().and_then(|p| p.to_str()).unwrap_or("");
    out.add_json(
        "dataset.json",
        &Info {
            summary: summarize(&ctx.ds),
            removed_duplicates: ctx.removed_duplicates,
            source,
        },
    );
}

pub fn fit(ctx: &Context, out: &mut OutputSet) -> Result<()> {
    #[derive(Serialize)]
    struct FitReport<'a> {
        material: &'a str,
        degree: usize,
        n: usize,
        parameters: Vec<String>,
        beta_hat: &'a [f64],
        s2: f64,
        nu: usize,
        r2: f64,
        sse: f64,
        xtx_inv: Vec<Vec<f64>>,
        covariance: Vec<Vec<f64>>,
    }
    let f = &ctx.fit;
    out.add_json(
        "fit.json",
        &FitReport {
            material: ctx.material(),
            degree: f.degree,
            n: f.n,
            parameters: ctx.names(),
            beta_hat: &f.beta_hat,
            s2: f.s2,
            nu: f.nu,
            r2: f.r2,
            sse: f.sse,
            xtx_inv: f.xtx_inv.rows(),
            covariance: f.sigma_scale.rows(),
        },
    );
    let pts = ctx.ds.points();
    out.add(
        "fit_residuals.csv",
        numeric_csv(
            &["up_km_s", "us_km_s", "fitted_km_s", "residual_km_s"],
            pts.iter().zip(&f.residuals).map(|(p, r)| vec![p.up, p.us, p.us - r, *r]),
        ),
    );
    add_svg(out, &ctx.cfg, "fit.svg", |o| {
        let c = read_columns(csv_of(o, "fit_residuals.csv"), &["up_km_s", "us_km_s", "fitted_km_s"])?;
        let mut line: Vec<(f64, f64)> = c[0].iter().cloned().zip(c[2].iter().cloned()).collect();
        line.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (lx, ly) = line.into_iter().unzip();
        Ok(Plot {
            title: format!("{}: least-squares fit", ctx.material()),
            x_label: "up (km/s)".into(),
            y_label: "us (km/s)".into(),
            series: vec![
                Series::Points { name: "measurements".into(), x: c[0].clone(), y: c[1].clone() },
                Series::Line { name: "fit".into(), x: lx, y: ly },
            ],
        })
    })
}

pub fn posterior(ctx: &Context, out: &mut OutputSet) -> Result<()> {
    #[derive(Serialize)]
    struct PosteriorReport<'a> {
        material: &'a str,
        prior: &'static str,
        degree: usize,
        n: usize,
        level: f64,
        parameters: Vec<String>,
        beta_mean: &'a [f64],
        scale: Vec<Vec<f64>>,
        nu: f64,
        ig_shape: f64,
        ig_scale: f64,
        covariance: Option<Vec<Vec<f64>>>,
        sigma2_mean: Option<f64>,
        sigma2_sd: Option<f64>,
    }
    let post = ctx.posterior()?;
    let level = ctx.cfg.level;
    let table = posterior_table(ctx.material(), &post, level)?;
    let (ext, bytes) = table_bytes(&table, ctx.cfg.format);
    out.add(format!("posterior_table.{ext}"), bytes);
    let s2 = sigma2_posterior_summary(&post);
    out.add_json(
        "posterior.json",
        &PosteriorReport {
            material: ctx.material(),
            prior: if post.is_informative() { "conjugate" } else { "flat" },
            degree: post.degree,
            n: post.n,
            level,
            parameters: ctx.names(),
            beta_mean: &post.beta_mean,
            scale: post.scale.rows(),
            nu: post.nu,
            ig_shape: post.ig_shape,
            ig_scale: post.ig_scale,
            covariance: post.marginal_beta().covariance().ok().map(|m| m.rows()),
            sigma2_mean: s2.mean.ok(),
            sigma2_sd: s2.sd.ok(),
        },
    );
    if ctx.cfg.degree != 1 {
        return Ok(());
    }
    let header = ["c0", "s"];
    let ell = credible_region_ellipse(&post, level)?;
    out.add("credible_region.csv", numeric_csv(&header, ell.boundary(ELLIPSE_POINTS).iter().map(|p| p.to_vec())));
    if let Some(prior) = &ctx.prior {
        let pe = prior_marginal(prior).ellipse(level)?;
        out.add("prior_region.csv", numeric_csv(&header, pe.boundary(ELLIPSE_POINTS).iter().map(|p| p.to_vec())));
    }
    add_svg(out, &ctx.cfg, "credible_region.svg", |o| {
        let c = read_columns(csv_of(o, "credible_region.csv"), &header)?;
        let mut series = vec![Series::Closed { name: format!("{} credible region", level), x: c[0].clone(), y: c[1].clone() }];
        if let Some(b) = o.get("prior_region.csv") {
            let p = read_columns(b, &header)?;
            series.push(Series::Closed { name: "prior region".into(), x: p[0].clone(), y: p[1].clone() });
        }
        series.push(Series::Points {
            name: "posterior mean".into(),
            x: vec![post.beta_mean[0]],
            y: vec![post.beta_mean[1]],
        });
        Ok(Plot {
            title: format!("{}: joint credible region", ctx.material()),
            x_label: "C0 (km/s)".into(),
            y_label: "S".into(),
            series,
        })
    })
}

pub fn sample(ctx: &Context, out: &mut OutputSet) -> Result<()> {
    let post = ctx.posterior()?;
    let draws = sample_beta(&post, ctx.cfg.samples, &ctx.rng.substream("sample"))?;
    let names = lower(&ctx.names());
    let mut header = vec!["draw"];
    header.extend(names.iter().map(|s| s.as_str()));
    out.add(
        "posterior_samples.csv",
        numeric_csv(
            &header,
            draws.rows().enumerate().map(|(i, r)| std::iter::once(i as f64).chain(r.iter().cloned()).collect()),
        ),
    );
    let last = names.last().expect("at least two coefficients").clone();
    add_svg(out, &ctx.cfg, "posterior_samples.svg", |o| {
        let c = read_columns(csv_of(o, "posterior_samples.csv"), &[last.as_str()])?;
        let (edges, counts) = histogram(&c[0], HISTOGRAM_BINS);
        Ok(Plot {
            title: format!("{}: posterior draws of {last}", ctx.material()),
            x_label: last.clone(),
            y_label: "count".into(),
            series: vec![Series::Bars { name: "posterior draws".into(), edges, counts }],
        })
    })
}

pub fn hugoniot(ctx: &Context, out: &mut OutputSet) -> Result<()> {
    #[derive(Serialize)]
    struct HugoniotReport {
        rho0: f64,
        p0: f64,
        e0: Option<f64>,
        level: f64,
        drawn: usize,
        rejected: usize,
        up_grid_points: usize,
        v_grid_points: usize,
    }
    let post = ctx.posterior()?;
    let rho0 = resolve_rho0(ctx.cfg.rho0, &ctx.ds)?;
    let init = InitialState::new(rho0, ctx.cfg.p0, ctx.cfg.e0)?;
    let grid = ctx.up_grid();
    let res = posterior_pv_band(
        &post,
        ctx.cfg.samples,
        &grid,
        &init,
        ctx.cfg.level,
        ctx.cfg.v_grid,
        &ctx.rng.substream("hugoniot"),
    )?;
    let b = &res.band;
    let mut header = vec!["v_cm3_g", "p_lo_gpa", "p_hi_gpa"];
    if b.p_mean.is_some() {
        header.push("p_mean_gpa");
    }
    out.add(
        "pv_band.csv",
        numeric_csv(
            &header,
            (0..b.v_grid.len()).map(|i| {
                let mut row = vec![b.v_grid[i], b.p_lo[i], b.p_hi[i]];
                if let Some(m) = &b.p_mean {
                    row.push(m[i]);
                }
                row
            }),
        ),
    );
    let curve = rh_transform(&post.beta_mean, &grid, &init)?;
    let mut header = vec!["up_km_s", "us_km_s", "v_cm3_g", "p_gpa"];
    if curve.e.is_some() {
        header.push("e_kj_g");
    }
    out.add(
        "hugoniot_curve.csv",
        numeric_csv(
            &header,
            (0..curve.len()).map(|i| {
                let mut row = vec![curve.up[i], curve.us[i], curve.v[i], curve.p[i]];
                if let Some(e) = &curve.e {
                    row.push(e[i]);
                }
                row
            }),
        ),
    );
    out.add_json(
        "hugoniot.json",
        &HugoniotReport {
            rho0,
            p0: init.p0,
            e0: init.e0,
            level: ctx.cfg.level,
            drawn: res.drawn,
            rejected: res.rejected,
            up_grid_points: grid.len(),
            v_grid_points: ctx.cfg.v_grid,
        },
    );
    add_svg(out, &ctx.cfg, "pv_band.svg", |o| {
        let c = read_columns(csv_of(o, "pv_band.csv"), &["v_cm3_g", "p_lo_gpa", "p_hi_gpa"])?;
        let m = read_columns(csv_of(o, "hugoniot_curve.csv"), &["v_cm3_g", "p_gpa"])?;
        Ok(Plot {
            title: format!("{}: Hugoniot pressure-volume band", ctx.material()),
            x_label: "V (cm³/g)".into(),
            y_label: "P (GPa)".into(),
            series: vec![
                Series::Band { name: format!("{} band", ctx.cfg.level), x: c[0].clone(), lo: c[1].clone(), hi: c[2].clone() },
                Series::Line { name: "posterior-mean curve".into(), x: m[0].clone(), y: m[1].clone() },
            ],
        })
    })
}

pub fn bands(ctx: &Context, out: &mut OutputSet) -> Result<()> {
    let post = ctx.posterior()?;
    let grid = ctx.up_grid();
    let cred = band(&post, &grid, ctx.cfg.level, BandKind::Credible)?;
    let pred = band(&post, &grid, ctx.cfg.level, BandKind::Prediction)?;
    out.add(
        "us_bands.csv",
        numeric_csv(
            &["up_km_s", "mean_us_km_s", "credible_lo_km_s", "credible_hi_km_s", "prediction_lo_km_s", "prediction_hi_km_s"],
            (0..grid.len()).map(|i| vec![grid[i], cred.mean[i], cred.lo[i], cred.hi[i], pred.lo[i], pred.hi[i]]),
        ),
    );
    add_svg(out, &ctx.cfg, "us_bands.svg", |o| {
        let c = read_columns(
            csv_of(o, "us_bands.csv"),
            &["up_km_s", "mean_us_km_s", "credible_lo_km_s", "credible_hi_km_s", "prediction_lo_km_s", "prediction_hi_km_s"],
        )?;
        Ok(Plot {
            title: format!("{}: shock velocity bands", ctx.material()),
            x_label: "up (km/s)".into(),
            y_label: "us (km/s)".into(),
            series: vec![
                Series::Band { name: "prediction".into(), x: c[0].clone(), lo: c[4].clone(), hi: c[5].clone() },
                Series::Band { name: "mean us".into(), x: c[0].clone(), lo: c[2].clone(), hi: c[3].clone() },
                Series::Line { name: "posterior mean".into(), x: c[0].clone(), y: c[1].clone() },
                Series::Points { name: "measurements".into(), x: ctx.ds.up(), y: ctx.ds.us() },
            ],
        })
    })
}

pub fn ppc(ctx: &Context, out: &mut OutputSet) -> Result<()> {
    let post = ctx.posterior()?;
    let res = posterior_predictive_check(&post, &ctx.ds, ctx.cfg.replicates, &ctx.rng.substream("ppc"))?;
    out.add(
        "ppc.csv",
        text_csv(
            &["rep", "up_km_s", "us_actual", "us_sim"],
            res.rows
                .iter()
                .map(|r| vec![r.rep.to_string(), format_float(r.up), format_float(r.actual), format_float(r.simulated)]),
        ),
    );
    out.add_json("ppc_summary.json", &res.replicate_stats());
    add_svg(out, &ctx.cfg, "ppc.svg", |o| {
        let c = read_columns(csv_of(o, "ppc.csv"), &["us_actual", "us_sim"])?;
        let lo = c[0].iter().chain(&c[1]).cloned().fold(f64::INFINITY, f64::min);
        let hi = c[0].iter().chain(&c[1]).cloned().fold(f64::NEG_INFINITY, f64::max);
        Ok(Plot {
            title: format!("{}: posterior predictive check", ctx.material()),
            x_label: "measured us (km/s)".into(),
            y_label: "replicated us (km/s)".into(),
            series: vec![
                Series::Points { name: "replicates".into(), x: c[0].clone(), y: c[1].clone() },
                Series::Line { name: "y = x".into(), x: vec![lo, hi], y: vec![lo, hi] },
            ],
        })
    })
}

#[derive(Serialize)]
struct ArmReport {
    n: usize,
    beta_hat: Vec<f64>,
    bootstrap: Vec<ParameterSummary>,
    posterior: Vec<ParameterSummary>,
    posterior_draw_mean: Vec<f64>,
    posterior_draw_sd: Vec<f64>,
}

fn arm_report(material: &str, arm: &SensitivityArm, level: f64) -> Result<ArmReport> {
    let cov = arm.posterior_draws.covariance();
    Ok(ArmReport {
        n: arm.n,
        beta_hat: arm.fit.beta_hat.clone(),
        bootstrap: bootstrap_table(material, &arm.ensemble, level)?,
        posterior: posterior_table(material, &arm.posterior, level)?,
        posterior_draw_mean: arm.posterior_draws.mean(),
        posterior_draw_sd: cov.diag().iter().map(|v| v.sqrt()).collect(),
    })
}

pub fn bootstrap(ctx: &Context, out: &mut OutputSet) -> Result<()> {
    #[derive(Serialize)]
    struct BootstrapReport {
        resamples: usize,
        redraws: usize,
        seed: u64,
        level: f64,
        parameters: Vec<String>,
        skewness: Vec<f64>,
    }
    let level = ctx.cfg.level;
    let ens = bootstrap_ensemble(&ctx.ds, ctx.cfg.degree, ctx.cfg.resamples, &ctx.rng.substream("bootstrap"))?;
    let table = bootstrap_table(ctx.material(), &ens, level)?;
    let (ext, bytes) = table_bytes(&table, ctx.cfg.format);
    out.add(format!("bootstrap_table.{ext}"), bytes);
    let names = lower(&ctx.names());
    let mut header = vec!["b"];
    header.extend(names.iter().map(|s| s.as_str()));
    out.add(
        "bootstrap_ensemble.csv",
        numeric_csv(
            &header,
            ens.estimates.rows().enumerate().map(|(i, r)| std::iter::once(i as f64).chain(r.iter().cloned()).collect()),
        ),
    );
    let grid = ctx.up_grid();
    let bb = bootstrap_bands(&ctx.ds, &ens, &grid, level)?;
    out.add(
        "bootstrap_bands.csv",
        numeric_csv(
            &["up_km_s", "mean_us_km_s", "confidence_lo_km_s", "confidence_hi_km_s", "prediction_lo_km_s", "prediction_hi_km_s"],
            (0..grid.len()).map(|i| vec![bb.up[i], bb.mean[i], bb.conf_lo[i], bb.conf_hi[i], bb.pred_lo[i], bb.pred_hi[i]]),
        ),
    );
    out.add_json(
        "bootstrap.json",
        &BootstrapReport {
            resamples: ens.resamples,
            redraws: ens.redraws,
            seed: ens.seed(),
            level,
            parameters: ctx.names(),
            skewness: (0..names.len()).map(|k| skewness(&ens, k)).collect(),
        },
    );
    if ctx.cfg.drop_max_up {
        let sens = sensitivity_drop_max_up(
            &ctx.ds,
            ctx.cfg.degree,
            ctx.cfg.resamples,
            ctx.cfg.samples,
            &ctx.rng.substream("sensitivity"),
        )?;
        #[derive(Serialize)]
        struct SensitivityReport {
            dropped_index: usize,
            dropped_up: f64,
            full: ArmReport,
            dropped: ArmReport,
        }
        out.add_json(
            "sensitivity.json",
            &SensitivityReport {
                dropped_index: sens.dropped_index,
                dropped_up: sens.dropped_up,
                full: arm_report(ctx.material(), &sens.full, level)?,
                dropped: arm_report(ctx.material(), &sens.dropped, level)?,
            },
        );
        let k = names.len() - 1;
        let hdr = ["b", "full", "dropped"];
        let (f, d) = (sens.full.ensemble.column(k), sens.dropped.ensemble.column(k));
        out.add(
            "sensitivity_ensemble.csv",
            numeric_csv(&hdr, (0..f.len()).map(|i| vec![i as f64, f[i], d[i]])),
        );
    }
    for name in names.clone() {
        add_svg(out, &ctx.cfg, &format!("bootstrap_{name}.svg"), |o| {
            let c = read_columns(csv_of(o, "bootstrap_ensemble.csv"), &[name.as_str()])?;
            let (edges, counts) = histogram(&c[0], HISTOGRAM_BINS);
            Ok(Plot {
                title: format!("{}: bootstrap distribution of {name}", ctx.material()),
                x_label: name.clone(),
                y_label: "count".into(),
                series: vec![Series::Bars { name: "bootstrap".into(), edges, counts }],
            })
        })?;
    }
    add_svg(out, &ctx.cfg, "bootstrap_bands.svg", |o| {
        let c = read_columns(
            csv_of(o, "bootstrap_bands.csv"),
            &["up_km_s", "mean_us_km_s", "confidence_lo_km_s", "confidence_hi_km_s", "prediction_lo_km_s", "prediction_hi_km_s"],
        )?;
        Ok(Plot {
            title: format!("{}: bootstrap bands", ctx.material()),
            x_label: "up (km/s)".into(),
            y_label: "us (km/s)".into(),
            series: vec![
                Series::Band { name: "prediction".into(), x: c[0].clone(), lo: c[4].clone(), hi: c[5].clone() },
                Series::Band { name: "confidence".into(), x: c[0].clone(), lo: c[2].clone(), hi: c[3].clone() },
                Series::Line { name: "bootstrap mean".into(), x: c[0].clone(), y: c[1].clone() },
                Series::Points { name: "measurements".into(), x: ctx.ds.up(), y: ctx.ds.us() },
            ],
        })
    })?;
    if ctx.cfg.drop_max_up {
        add_svg(out, &ctx.cfg, "sensitivity.svg", |o| {
            let c = read_columns(csv_of(o, "sensitivity_ensemble.csv"), &["full", "dropped"])?;
            let (ef, cf) = histogram(&c[0], HISTOGRAM_BINS);
            let (ed, cd) = histogram(&c[1], HISTOGRAM_BINS);
            Ok(Plot {
                title: format!("{}: bootstrap {} with and without the largest up", ctx.material(), names[names.len() - 1]),
                x_label: names[names.len() - 1].clone(),
                y_label: "count".into(),
                series: vec![
                    Series::Bars { name: "all points".into(), edges: ef, counts: cf },
                    Series::Bars { name: "largest up dropped".into(), edges: ed, counts: cd },
                ],
            })
        })?;
    }
    Ok(())
}

pub fn validate(ctx: &Context, out: &mut OutputSet) -> Result<()> {
    #[derive(Serialize)]
    struct OracleReport {
        layout: &'static str,
        grid_points: usize,
        boundary_mass: f64,
        max_rel_err: f64,
        mode_cell: [f64; 3],
        parameters: Vec<crate::validation::ParameterCheck>,
    }
    let points = ctx.cfg.grid_points;
    let (layout, oracle) = match GridSpec::around_fit(&ctx.fit, points, 8.0)
        .and_then(|g| grid_posterior_oracle(&ctx.ds, ctx.cfg.degree, &g))
    {
        Ok(o) => ("around_fit", o),
        Err(Error::GridTooCoarse { .. }) => {
            let g = GridSpec::heavy_tailed(&ctx.fit, points, 1e-10)?;
            ("heavy_tailed", grid_posterior_oracle(&ctx.ds, ctx.cfg.degree, &g)?)
        }
        Err(e) => return Err(e),
    };
    out.add_json(
        "oracle.json",
        &OracleReport {
            layout,
            grid_points: points,
            boundary_mass: oracle.boundary_mass,
            max_rel_err: oracle.max_rel_err(),
            mode_cell: oracle.mode_cell,
            parameters: oracle.parameters,
        },
    );
    Ok(())
}

pub fn report(ctx: &Context, out: &mut OutputSet) -> Result<()> {
    fit(ctx, out)?;
    posterior(ctx, out)?;
    hugoniot(ctx, out)?;
    bands(ctx, out)?;
    ppc(ctx, out)?;
    bootstrap(ctx, out)?;
    if ctx.cfg.degree == 1 {
        validate(ctx, out)?;
    }
    Ok(())
}
