use std::fmt::Write as _;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use propsizer::api::{to_json, Engine, EvaluateRequest, Failure, FailureKind};
use propsizer::baseline::{compare, BruteForceConfig};
use propsizer::evaluator::PerformanceReport;
use propsizer::model::atmosphere::DEFAULT_TEMPERATURE_C;
use propsizer::model::battery::DEFAULT_OTHER_CURRENT_A;
use propsizer::model::requirements::DEFAULT_THRUST_RATIO;
use propsizer::model::{Environment, RequirementsInput};
use propsizer::optimizer::DesignResult;
use propsizer::{Catalog, StatModels};

#[derive(Parser)]
#[command(name = "propsizer", version, about = "Multicopter propulsion sizing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Size and select a propulsion system for a set of requirements.
    Optimize(OptimizeArgs),
    /// Evaluate a fully specified propulsion system.
    Evaluate(EvaluateArgs),
    /// Fit statistical models from a catalog and write them as JSON.
    Fit(FitArgs),
    /// Run the analytical optimizer and the exhaustive search side by side.
    Compare(CompareArgs),
    /// Serve the JSON API over HTTP.
    Serve(ServeArgs),
    /// Print the JSON Schema of every request and response body.
    Schema {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Sources {
    /// Catalog directory; the bundled sample catalog when absent.
    #[arg(long, env = "PROPSIZER_CATALOG_DIR")]
    catalog: Option<PathBuf>,
    /// Pre-fitted models; fitted from the catalog when absent.
    #[arg(long)]
    models: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct OptimizeArgs {
    #[arg(long = "weight-N", alias = "weight-n", conflicts_with = "hover_thrust")]
    weight: Option<f64>,
    #[arg(long = "hover-thrust-N", alias = "hover-thrust-n")]
    hover_thrust: Option<f64>,
    #[arg(long)]
    rotors: u32,
    /// Hover thrust over maximum thrust.
    #[arg(long, default_value_t = DEFAULT_THRUST_RATIO)]
    gamma: f64,
    #[arg(long)]
    endurance_min: f64,
    #[arg(long, default_value_t = 0.0)]
    altitude_m: f64,
    #[arg(long = "temp-c", default_value_t = DEFAULT_TEMPERATURE_C)]
    temp_c: f64,
    #[arg(long, default_value_t = DEFAULT_OTHER_CURRENT_A)]
    other_current_a: f64,
    #[command(flatten)]
    sources: Sources,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct EvaluateArgs {
    /// JSON file with a propulsion system.
    #[arg(long)]
    system: PathBuf,
    #[arg(long = "hover-thrust-N", alias = "hover-thrust-n")]
    hover_thrust: f64,
    #[arg(long, default_value_t = DEFAULT_THRUST_RATIO)]
    gamma: f64,
    /// Overrides the altitude in the system file.
    #[arg(long)]
    altitude_m: Option<f64>,
    #[command(flatten)]
    sources: Sources,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct FitArgs {
    #[arg(long, env = "PROPSIZER_CATALOG_DIR")]
    catalog: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// JSON file with requirements, same schema as the optimize endpoint.
    #[arg(long)]
    requirements: PathBuf,
    #[command(flatten)]
    sources: Sources,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:8080")]
    addr: SocketAddr,
    #[command(flatten)]
    sources: Sources,
}

fn usage(message: impl std::fmt::Display) -> Failure {
    Failure {
        kind: FailureKind::InvalidInput,
        error: message.to_string(),
        step: None,
        violations: Vec::new(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_catalog(dir: Option<&Path>) -> Result<Catalog, Failure> {
    let catalog = match dir {
        Some(d) => Catalog::load_dir(d)?,
        None => Catalog::bundled()?,
    };
    for r in &catalog.report.rejected {
        eprintln!("warning: {r}");
    }
    Ok(catalog)
}

fn engine(sources: &Sources) -> Result<Engine, Failure> {
    let catalog = load_catalog(sources.catalog.as_deref())?;
    let models = sources.models.as_deref().map(StatModels::load).transpose()?;
    Ok(Engine::new(catalog, models)?)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn design_text(d: &DesignResult) -> String {
    let mut s = String::new();
    let o = &d.optimal;
    let _ = writeln!(s, "optimal parameters");
    let _ = writeln!(
        s,
        "  propeller  D {:.4} m  H {:.4} m  blades {}",
        o.diameter_m, o.pitch_m, o.blades
    );
    let _ = writeln!(
        s,
        "  motor      {:.0} V  {:.2} A  KV {:.1}",
        o.motor_max_voltage_v, o.motor_max_current_a, o.kv_rpm_per_v
    );
    let _ = writeln!(
        s,
        "  esc        {:.0} V  {:.2} A",
        o.esc_max_voltage_v, o.esc_max_current_a
    );
    let _ = writeln!(
        s,
        "  battery    {:.0} V  {:.0} mAh  {:.2} C",
        o.battery_voltage_v, o.battery_capacity_mah, o.battery_max_discharge_c
    );
    let sel = &d.selection;
    let _ = writeln!(s, "selection");
    let _ = writeln!(s, "  propeller  {}", sel.propeller.id);
    let _ = writeln!(s, "  motor      {}", sel.motor.id);
    let _ = writeln!(s, "  esc        {}", sel.esc.id);
    let _ = writeln!(s, "  battery    {}", sel.battery.label());
    s += &report_text(&d.performance);
    let _ = writeln!(s, "propulsion weight {:.2} N", d.system_weight_n);
    let _ = writeln!(s, "trace");
    for t in &d.trace {
        let _ = write!(s, "  {:>2} {:<26} {}", t.step, t.name, t.values);
        match &t.note {
            Some(n) => {
                let _ = writeln!(s, "  ({n})");
            }
            None => s.push('\n'),
        }
    }
    s
}

fn report_text(r: &PerformanceReport) -> String {
    let mut s = String::new();
    let h = &r.hover;
    let f = &r.full_throttle;
    let _ = writeln!(
        s,
        "hover        {:.0} RPM  {:.2} A motor  throttle {:.3}  {:.2} A battery",
        h.speed_rpm, h.motor_current_a, h.throttle, h.battery_current_a
    );
    let _ = writeln!(
        s,
        "full thrott. {:.0} RPM  {:.2} A motor  {:.2} N",
        f.speed_rpm, f.motor_current_a, f.thrust_n
    );
    let _ = writeln!(s, "endurance    {:.2} min", r.endurance_min);
    let _ = writeln!(s, "max thrust   {:.2} N", r.max_thrust_capability_n);
    if r.violations.is_empty() {
        let _ = writeln!(s, "all safety checks pass");
    }
    for v in &r.violations {
        let _ = writeln!(s, "violation    {v}");
    }
    s
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Optimize(a) => {
            let engine = engine(&a.sources)?;
            let input = RequirementsInput {
                total_weight_n: a.weight,
                hover_thrust_n: a.hover_thrust,
                rotor_count: a.rotors,
                thrust_ratio: a.gamma,
                endurance_min: a.endurance_min,
                altitude_m: a.altitude_m,
                temperature_c: a.temp_c,
                other_current_a: a.other_current_a,
            };
            let design = engine.optimize(&input)?;
            let text = match a.format {
                Format::Json => to_json(&design),
                Format::Text => design_text(&design),
            };
            emit(&text, a.out.as_deref())
        }
        Command::Evaluate(a) => {
            let engine = engine(&a.sources)?;
            let mut system: propsizer::PropulsionSystem =
                serde_json::from_str(&read(&a.system)?).map_err(|e| usage(format!("{}: {e}", a.system.display())))?;
            if let Some(h) = a.altitude_m {
                system.environment = Environment::new(h, system.environment.temperature_c)?;
            }
            let request = EvaluateRequest {
                system,
                hover_thrust_n: a.hover_thrust,
                thrust_ratio: a.gamma,
            };
            let report = engine.evaluate(&request)?;
            let text = match a.format {
                Format::Json => to_json(&report),
                Format::Text => report_text(&report),
            };
            emit(&text, a.out.as_deref())
        }
        Command::Fit(a) => {
            let catalog = load_catalog(a.catalog.as_deref())?;
            let models = StatModels::fit(&catalog)?;
            let mut text = models.to_json()?;
            text.push('\n');
            emit(&text, a.out.as_deref())
        }
        Command::Compare(a) => {
            let engine = engine(&a.sources)?;
            let input: RequirementsInput = serde_json::from_str(&read(&a.requirements)?)
                .map_err(|e| usage(format!("{}: {e}", a.requirements.display())))?;
            let req = input.resolve()?;
            let report = compare(
                &req,
                &engine.catalog,
                &engine.models,
                &engine.config,
                &BruteForceConfig::default(),
            )?;
            let text = match a.format {
                Format::Json => to_json(&report),
                Format::Text => report.to_table(),
            };
            emit(&text, None)
        }
        Command::Schema { out } => emit(&propsizer::schema::api_schema_json(), out.as_deref()),
        Command::Serve(a) => {
            let engine = Arc::new(engine(&a.sources)?);
            let rt = tokio::runtime::Runtime::new().map_err(usage)?;
            eprintln!("listening on http://{}", a.addr);
            rt.block_on(propsizer::service::serve(a.addr, engine))
                .map_err(|e| Failure {
                    kind: FailureKind::Internal,
                    error: e.to_string(),
                    step: None,
                    violations: Vec::new(),
                })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprint!("{}", to_json(&f));
            match f.kind {
                FailureKind::Infeasible => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
