//! One function per subcommand. Each reads its parameters, computes, and
//! returns the files to write.

use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use anyonchain::analytic::{
    asymptotic_aee, asymptotic_variance, exact_average_aee, exact_variance, q_sree, q_sree_direct, resolved_crossover,
    ParityCase, SectorDims,
};
use anyonchain::category::validate;
use anyonchain::entropy::monte_carlo_aee;
use anyonchain::fusion::{bipartite_decomposition, dim_bruteforce, dim_verlinde};
use anyonchain::hamiltonian::{
    asymmetry_curve, eigenstate_aee_curve, finite_size_fit, level_spacing_ratios, mid_spectrum_states,
    reference_ratio_pdfs, solve, Chain, GoldenChainSpec, Parity, PoissonVariant, HISTOGRAM_BINS,
};
use anyonchain::{AnyonModel, Label, ModelKind};

use crate::config::Params;
use crate::output::{config_path, opt_real, real, Csv, Outputs};
use crate::svg::{Chart, Series, Style};

/// What a finished run hands back to `main`.
pub struct Run {
    pub primary: String,
    pub plot: Option<String>,
    /// Set when the run completed but its verdict is negative.
    pub failed: Option<String>,
}

impl Run {
    fn csv(csv: Csv) -> Run {
        Run { primary: csv.into_string(), plot: None, failed: None }
    }

    fn with_plot(mut self, chart: Chart) -> Run {
        self.plot = Some(chart.render());
        self
    }
}

/// Write the run's outputs: to `out` (plus the resolved config next to it)
/// or to stdout.
pub fn emit(params: &Params, out: Option<PathBuf>, plot: Option<PathBuf>, run: &Run) -> Result<()> {
    let mut files = Outputs::default();
    match &out {
        Some(path) => {
            files.add(path, run.primary.as_bytes());
            files.add(config_path(path), params.resolved_text());
        }
        None => print!("{}", run.primary),
    }
    match (plot, &run.plot) {
        (Some(path), Some(svg)) => files.add(path, svg.as_bytes()),
        (Some(_), None) => bail!("this command has no plot"),
        _ => {}
    }
    files.commit()
}

struct Model {
    model: AnyonModel,
    family: String,
    param: String,
}

impl Model {
    fn load(p: &mut Params) -> Result<Model> {
        let sel = p.text_or("model", "fibonacci");
        let model = match sel.as_str() {
            "fibonacci" => AnyonModel::fibonacci(),
            "su2k" => {
                let k: u32 = p.required("k")?;
                if k > 200 {
                    bail!("k = {k} is too large");
                }
                AnyonModel::su2k(k)
            }
            "zn" => AnyonModel::abelian_zn(p.required("n")?)?,
            path if path.ends_with(".json") => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading model {path}"))?;
                AnyonModel::from_json(&text).with_context(|| format!("loading model {path}"))?
            }
            other => bail!("unknown model '{other}' (expected fibonacci, su2k, zn or a .json file)"),
        };
        let family = model.kind().family().replace(',', ";");
        let param = model.kind().parameter().map(|v| v.to_string()).unwrap_or_default();
        Ok(Model { model, family, param })
    }

    fn label(&self, p: &mut Params, key: &str, default: Option<&str>) -> Result<Label> {
        let text = match default {
            Some(d) => p.text_or(key, d),
            None => p.text(key).ok_or_else(|| anyhow!("missing required value: {key}"))?,
        };
        Ok(self.model.parse_label(&text)?)
    }

    fn jext(&self, p: &mut Params) -> Result<Label> {
        let default = match self.model.kind() {
            ModelKind::Fibonacci => "tau".to_string(),
            ModelKind::Su2k { .. } => "1/2".to_string(),
            _ if self.model.rank() > 1 => self.model.name(Label(1)).to_string(),
            _ => self.model.name(Label(0)).to_string(),
        };
        self.label(p, "jext", Some(&default))
    }

    fn name(&self, a: Label) -> String {
        self.model.name(a).replace(',', ";")
    }
}

fn check_cut(l: usize, l_as: &[usize], upper: usize) -> Result<()> {
    match l_as.iter().find(|&&a| a == 0 || a > upper) {
        Some(a) => bail!("L_A = {a} outside 1..={upper} for L = {l}"),
        None => Ok(()),
    }
}

pub fn model_validate(p: &mut Params) -> Result<Run> {
    let m = Model::load(p)?;
    p.seal()?;
    let report = validate(&m.model);
    let mut csv = Csv::new(&["model", "k", "check", "residual", "pass"]);
    for (name, r) in report.residuals() {
        let pass = r < anyonchain::tol::ACCEPT;
        csv.row(&[m.family.clone(), m.param.clone(), name.to_string(), real(r), pass.to_string()]);
    }
    let mut run = Run::csv(csv);
    if !report.is_valid() {
        run.failed = Some(format!("model fails validation, max residual {:e}", report.max_residual()));
    }
    Ok(run)
}

pub fn model_dump(p: &mut Params) -> Result<Run> {
    let m = Model::load(p)?;
    p.seal()?;
    let mut json = m.model.to_json()?;
    json.push('\n');
    Ok(Run { primary: json, plot: None, failed: None })
}

pub fn dims(p: &mut Params) -> Result<Run> {
    let m = Model::load(p)?;
    let jext = m.jext(p)?;
    let ls = p.required_usize_list("L")?;
    let totals: Vec<Label> = match p.text("J") {
        Some(t) => vec![m.model.parse_label(&t)?],
        None => m.model.labels().collect(),
    };
    p.seal()?;
    let mut csv = Csv::new(&["model", "k", "jext", "L", "J", "dim_bruteforce", "dim_verlinde"]);
    for &l in &ls {
        for &total in &totals {
            let brute = dim_bruteforce(&m.model, jext, l, total)?;
            let verlinde = dim_verlinde(&m.model, jext, l, total)?;
            csv.row(&[
                m.family.clone(),
                m.param.clone(),
                m.name(jext),
                l.to_string(),
                m.name(total),
                brute.to_string(),
                real(verlinde),
            ]);
        }
    }
    Ok(Run::csv(csv))
}

enum Mode {
    Analytic,
    MonteCarlo,
}

pub fn page_curve(p: &mut Params, analytic: bool, montecarlo: bool) -> Result<Run> {
    let mode = match (analytic, montecarlo) {
        (true, true) => bail!("choose one of --analytic and --montecarlo"),
        (true, false) => {
            p.set_flag("mode", "analytic");
            p.text("mode")
        }
        (false, true) => {
            p.set_flag("mode", "montecarlo");
            p.text("mode")
        }
        (false, false) => p.text("mode"),
    };
    let mode = match mode.as_deref() {
        Some("analytic") => Mode::Analytic,
        Some("montecarlo") => Mode::MonteCarlo,
        Some(other) => bail!("unknown mode '{other}'"),
        None => bail!("choose one of --analytic and --montecarlo"),
    };
    let m = Model::load(p)?;
    let jext = m.jext(p)?;
    let l: usize = p.required("L")?;
    let total = m.label(p, "J", Some("0"))?;
    let l_as = p.usize_list("LA", || (1..l).collect())?;
    check_cut(l, &l_as, l)?;
    match mode {
        Mode::Analytic => {
            p.seal()?;
            let mut csv = Csv::new(&["model", "k", "jext", "L", "LA", "J", "exact_aee", "asympt_aee", "exact_var"]);
            let mut curve = Vec::new();
            let mut asym_curve = Vec::new();
            for &l_a in &l_as {
                let dims = SectorDims::new(&m.model, jext, l, l_a, total)?;
                let f = l_a as f64 / l as f64;
                let exact = exact_average_aee(&dims)?;
                let asym = if l_a < l { Some(asymptotic_aee(&m.model, jext, total, l, f)?) } else { None };
                curve.push((f, exact));
                if let Some(a) = asym {
                    asym_curve.push((f, a));
                }
                csv.row(&[
                    m.family.clone(),
                    m.param.clone(),
                    m.name(jext),
                    l.to_string(),
                    l_a.to_string(),
                    m.name(total),
                    real(exact),
                    opt_real(asym),
                    real(exact_variance(&dims)?),
                ]);
            }
            let chart = Chart::new(&format!("Average AEE, L = {l}, J = {}", m.name(total)), "f = L_A / L", "AEE")
                .push(Series::new("exact", curve, Style::Line))
                .push(Series::new("asymptotic", asym_curve, Style::Points));
            Ok(Run::csv(csv).with_plot(chart))
        }
        Mode::MonteCarlo => {
            let samples: usize = p.or("samples", 1000)?;
            let seed: u64 = p.or("seed", 0)?;
            p.seal()?;
            if samples < 2 {
                bail!("need at least two samples");
            }
            let mut csv = Csv::new(&[
                "model",
                "k",
                "jext",
                "L",
                "LA",
                "J",
                "n_samples",
                "seed",
                "mean_aee",
                "stderr",
                "sample_var",
            ]);
            let mut curve = Vec::new();
            let mut exact_curve = Vec::new();
            for &l_a in &l_as {
                let d = Arc::new(bipartite_decomposition(&m.model, jext, l, l_a, total)?);
                let stats = monte_carlo_aee(&d, samples, seed)?;
                let f = l_a as f64 / l as f64;
                curve.push((f, stats.mean));
                exact_curve.push((f, exact_average_aee(&SectorDims::from_decomposition(&d))?));
                csv.row(&[
                    m.family.clone(),
                    m.param.clone(),
                    m.name(jext),
                    l.to_string(),
                    l_a.to_string(),
                    m.name(total),
                    samples.to_string(),
                    seed.to_string(),
                    real(stats.mean),
                    real(stats.standard_error),
                    real(stats.sample_variance),
                ]);
            }
            let chart = Chart::new(&format!("Haar AEE, L = {l}, J = {}", m.name(total)), "f = L_A / L", "AEE")
                .push(Series::new("Monte Carlo", curve, Style::Points))
                .push(Series::new("exact", exact_curve, Style::Line));
            Ok(Run::csv(csv).with_plot(chart))
        }
    }
}

pub fn variance(p: &mut Params) -> Result<Run> {
    let m = Model::load(p)?;
    let jext = m.jext(p)?;
    let ls = p.usize_list("L", || (8..=20).step_by(2).collect())?;
    let total = m.label(p, "J", Some("0"))?;
    let f: f64 = p.or("f", 0.5)?;
    p.seal()?;
    if !(f > 0.0 && f < 1.0) {
        bail!("f must lie in (0, 1)");
    }
    let mut csv =
        Csv::new(&["model", "k", "jext", "L", "LA", "J", "f", "exact_var", "log_exact_var", "asympt_exponent"]);
    let mut pts = Vec::new();
    for &l in &ls {
        let l_a = ((f * l as f64).round() as usize).clamp(1, l.saturating_sub(1).max(1));
        if l < 2 {
            bail!("L must be at least 2");
        }
        let cut_f = l_a as f64 / l as f64;
        let var = exact_variance(&SectorDims::new(&m.model, jext, l, l_a, total)?)?;
        pts.push((l as f64, var.ln()));
        csv.row(&[
            m.family.clone(),
            m.param.clone(),
            m.name(jext),
            l.to_string(),
            l_a.to_string(),
            m.name(total),
            real(cut_f),
            real(var),
            real(var.ln()),
            real(asymptotic_variance(&m.model, jext, l, cut_f)?),
        ]);
    }
    let chart =
        Chart::new("Haar variance of the AEE", "L", "log variance").push(Series::new("exact", pts, Style::Line));
    Ok(Run::csv(csv).with_plot(chart))
}

pub fn crossover(p: &mut Params) -> Result<Run> {
    let m = Model::load(p)?;
    let jext = m.jext(p)?;
    let l: usize = p.required("L")?;
    let total = m.label(p, "J", Some("0"))?;
    let s: f64 = p.or("s", 1.0)?;
    let lambdas = p.f64_list("Lambda", "-4:4:0.5")?;
    p.seal()?;
    let mut csv = Csv::new(&["model", "k", "jext", "L", "J", "s", "Lambda", "f", "resolved_aee"]);
    let mut pts = Vec::new();
    for &lam in &lambdas {
        let f = 0.5 + lam / (2.0 * (l as f64).powf(s));
        let v = resolved_crossover(&m.model, jext, total, l, lam, s)?;
        pts.push((lam, v));
        csv.row(&[
            m.family.clone(),
            m.param.clone(),
            m.name(jext),
            l.to_string(),
            m.name(total),
            real(s),
            real(lam),
            real(f),
            real(v),
        ]);
    }
    let chart = Chart::new(&format!("Crossover near f = 1/2, L = {l}"), "Lambda", "AEE").push(Series::new(
        "resolved",
        pts,
        Style::Line,
    ));
    Ok(Run::csv(csv).with_plot(chart))
}

pub fn qsree(p: &mut Params) -> Result<Run> {
    let m = Model::load(p)?;
    let ModelKind::Su2k { k } = *m.model.kind() else {
        bail!("qsree needs --model su2k");
    };
    let jext = m.jext(p)?;
    let total = m.label(p, "J", Some("0"))?;
    let l: usize = p.required("L")?;
    let fs = p.f64_list("f", "0.1:0.9:0.1")?;
    let default_case = if k % 2 == 0 { "both" } else { "integer" };
    let cases = match p.text_or("case", default_case).as_str() {
        "integer" => vec![ParityCase::Integer],
        "half-integer" => vec![ParityCase::HalfInteger],
        "both" => vec![ParityCase::Integer, ParityCase::HalfInteger],
        other => bail!("unknown case '{other}' (integer, half-integer or both)"),
    };
    p.seal()?;
    let mut csv = Csv::new(&["k", "jext", "J", "L", "f", "case", "q_sree", "q_sree_direct"]);
    for &case in &cases {
        for &f in &fs {
            let name = match case {
                ParityCase::Integer => "integer",
                ParityCase::HalfInteger => "half-integer",
            };
            csv.row(&[
                k.to_string(),
                m.name(jext),
                m.name(total),
                l.to_string(),
                real(f),
                name.to_string(),
                real(q_sree(k, jext, total, l, f, case)?),
                real(q_sree_direct(k, jext, total, l, f, case)?),
            ]);
        }
    }
    Ok(Run::csv(csv))
}

struct ChainRun {
    chain: Chain,
    total: Label,
    total_name: String,
    ls: Vec<usize>,
    parity: Option<Parity>,
    lambdas: Vec<f64>,
}

impl ChainRun {
    fn load(p: &mut Params) -> Result<ChainRun> {
        let m = Model::load(p)?;
        let jext = m.jext(p)?;
        let ls = p.required_usize_list("L")?;
        let total = m.label(p, "J", Some("0"))?;
        let parity = match p.text_or("parity", "all").as_str() {
            "all" => None,
            "+1" | "1" | "even" => Some(Parity::Even),
            "-1" | "odd" => Some(Parity::Odd),
            other => bail!("unknown parity '{other}' (+1, -1 or all)"),
        };
        let lambdas = p.f64_list("lambda", "0.9")?;
        let total_name = m.name(total);
        let chain = Chain::new(m.model, jext)?;
        Ok(ChainRun { chain, total, total_name, ls, parity, lambdas })
    }

    fn spec(&self, l: usize, lambda: f64) -> GoldenChainSpec {
        GoldenChainSpec { l, lambda, total: self.total, parity: self.parity }
    }

    fn parity_name(&self) -> &'static str {
        match self.parity {
            None => "all",
            Some(Parity::Even) => "+1",
            Some(Parity::Odd) => "-1",
        }
    }

    fn prefix(&self, l: usize, lambda: f64) -> Vec<String> {
        vec![l.to_string(), self.total_name.clone(), self.parity_name().to_string(), real(lambda)]
    }

    fn lengths(&self) -> String {
        self.ls.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(", ")
    }
}

pub fn chain_spectrum(p: &mut Params) -> Result<Run> {
    let c = ChainRun::load(p)?;
    p.seal()?;
    let mut csv = Csv::new(&["L", "J", "parity", "lambda", "m", "E_m"]);
    for &l in &c.ls {
        for &lam in &c.lambdas {
            let s = solve(&c.chain, &c.spec(l, lam), false)?;
            for (i, e) in s.eigenvalues.iter().enumerate() {
                let mut row = c.prefix(l, lam);
                row.extend([i.to_string(), real(*e)]);
                csv.row(&row);
            }
        }
    }
    Ok(Run::csv(csv))
}

pub fn chain_levels(p: &mut Params) -> Result<Run> {
    let c = ChainRun::load(p)?;
    let variant = match p.text_or("poisson", "standard").as_str() {
        "standard" => PoissonVariant::Standard,
        "caption" => PoissonVariant::Caption,
        other => bail!("unknown poisson variant '{other}' (standard or caption)"),
    };
    p.seal()?;
    let mut csv = Csv::new(&["L", "J", "parity", "lambda", "m", "E_m", "r_m"]);
    let mut chart = Chart::new(&format!("Level-spacing ratios, L = {}", c.lengths()), "r", "P(r)");
    for &l in &c.ls {
        for &lam in &c.lambdas {
            let s = solve(&c.chain, &c.spec(l, lam), false)?;
            let stats = level_spacing_ratios(&s.eigenvalues)?;
            eprintln!("L = {l}, lambda = {lam}: dim = {}, mean r = {:.4}", s.block_dim, stats.mean);
            for (i, e) in s.eigenvalues.iter().enumerate() {
                let mut row = c.prefix(l, lam);
                row.extend([i.to_string(), real(*e), opt_real(stats.per_level[i])]);
                csv.row(&row);
            }
            let w = 1.0 / HISTOGRAM_BINS as f64;
            chart = chart.push(Series::new(format!("L = {l}, lambda = {lam}"), stats.histogram, Style::Bars(w)));
        }
    }
    let grid: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
    let pdfs: Vec<_> =
        grid.iter().map(|&r| reference_ratio_pdfs(r, variant).map(|v| (r, v))).collect::<Result<_, _>>()?;
    chart = chart
        .push(Series::new("GOE", pdfs.iter().map(|(r, v)| (*r, v.goe)).collect(), Style::Line))
        .push(Series::new("Poisson", pdfs.iter().map(|(r, v)| (*r, v.poisson)).collect(), Style::Line));
    Ok(Run::csv(csv).with_plot(chart))
}

fn window(p: &mut Params) -> Result<Option<usize>> {
    let w: Option<usize> = p.opt("window")?;
    if w == Some(0) {
        bail!("window must be positive");
    }
    Ok(w)
}

/// Explicit cuts apply to every length; otherwise `default(L)`.
fn cuts(
    p: &mut Params,
    ls: &[usize],
    default: fn(usize) -> Vec<usize>,
    upper: fn(usize) -> usize,
) -> Result<Vec<Vec<usize>>> {
    let given = p.opt_usize_list("LA")?;
    ls.iter()
        .map(|&l| {
            let l_as = given.clone().unwrap_or_else(|| default(l));
            check_cut(l, &l_as, upper(l))?;
            Ok(l_as)
        })
        .collect()
}

pub fn chain_aee_curve(p: &mut Params) -> Result<Run> {
    let c = ChainRun::load(p)?;
    let cut_lists = cuts(p, &c.ls, |l| (1..l).collect(), |l| l)?;
    let w = window(p)?;
    p.seal()?;
    let mut csv = Csv::new(&[
        "L",
        "J",
        "parity",
        "lambda",
        "LA",
        "f",
        "mean_aee",
        "n_states",
        "analytic_exact",
        "analytic_asymptotic",
    ]);
    let mut chart =
        Chart::new(&format!("Mid-spectrum AEE, L = {}, J = {}", c.lengths(), c.total_name), "f = L_A / L", "AEE");
    for &lam in &c.lambdas {
        let mut half_ratios = Vec::new();
        for (&l, l_as) in c.ls.iter().zip(&cut_lists) {
            let states = mid_spectrum_states(&c.chain, &c.spec(l, lam), w)?;
            warn_clipped(&states);
            let curve = eigenstate_aee_curve(&c.chain, &states, l_as)?;
            for pt in &curve {
                let mut row = c.prefix(l, lam);
                row.extend([
                    pt.l_a.to_string(),
                    real(pt.f),
                    real(pt.mean_aee),
                    pt.n_states.to_string(),
                    real(pt.analytic_exact),
                    opt_real(pt.analytic_asymptotic),
                ]);
                csv.row(&row);
                if 2 * pt.l_a == l {
                    half_ratios.push((l as f64, pt.mean_aee / pt.analytic_exact));
                }
            }
            let label = format!("L = {l}, lambda = {lam}");
            chart = chart.push(Series::new(label, curve.iter().map(|pt| (pt.f, pt.mean_aee)).collect(), Style::Points));
            if lam == c.lambdas[0] {
                let label = format!("Haar average, L = {l}");
                chart = chart.push(Series::new(
                    label,
                    curve.iter().map(|pt| (pt.f, pt.analytic_exact)).collect(),
                    Style::Line,
                ));
            }
        }
        if half_ratios.len() >= 2 {
            let fit = finite_size_fit(&half_ratios)?;
            eprintln!(
                "lambda = {lam}: half-cut ratio ~ 1 + a/L + b/L^2 with a = {:.4}, b = {:.4}, rms = {:.2e}",
                fit.a, fit.b, fit.rms
            );
        }
    }
    Ok(Run::csv(csv).with_plot(chart))
}

pub fn chain_asymmetry(p: &mut Params) -> Result<Run> {
    let c = ChainRun::load(p)?;
    let cut_lists = cuts(p, &c.ls, |l| (1..=l / 2).collect(), |l| l.saturating_sub(1))?;
    let w = window(p)?;
    p.seal()?;
    let mut csv = Csv::new(&["L", "J", "parity", "lambda", "LA", "f", "delta"]);
    let d_j = c.chain.model.qdim(c.total);
    let mut chart =
        Chart::new(&format!("Page-curve asymmetry, L = {}, J = {}", c.lengths(), c.total_name), "f = L_A / L", "Delta");
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (&l, l_as) in c.ls.iter().zip(&cut_lists) {
        for &lam in &c.lambdas {
            let states = mid_spectrum_states(&c.chain, &c.spec(l, lam), w)?;
            warn_clipped(&states);
            let curve = asymmetry_curve(&c.chain, &states, l_as)?;
            for pt in &curve {
                let mut row = c.prefix(l, lam);
                row.extend([pt.l_a.to_string(), real(pt.f), real(pt.delta)]);
                csv.row(&row);
                lo = lo.min(pt.f);
                hi = hi.max(pt.f);
            }
            let label = format!("L = {l}, lambda = {lam}");
            chart = chart.push(Series::new(label, curve.iter().map(|pt| (pt.f, pt.delta)).collect(), Style::Points));
        }
    }
    chart = chart.push(Series::new("log d_J", vec![(lo, d_j.ln()), (hi, d_j.ln())], Style::Line));
    Ok(Run::csv(csv).with_plot(chart))
}

fn warn_clipped(states: &anyonchain::hamiltonian::MidSpectrum) {
    if states.clipped {
        eprintln!("warning: window clipped to the block dimension {}", states.block_dim);
    }
}

/// Output locations, read before the command so they never enter the
/// resolved config.
pub fn destinations(p: &mut Params) -> (Option<PathBuf>, Option<PathBuf>) {
    (p.text("out").map(PathBuf::from), p.text("plot").map(PathBuf::from))
}
