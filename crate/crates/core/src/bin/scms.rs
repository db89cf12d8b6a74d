//! Command-line front end: length tables, benchmarks, the BSM exchange
//! simulator, and chain-file export/import.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_core::SeedableRng;

use scms_core::bench::{bench_kem, bench_signatures, render_kem_report, render_sign_report};
use scms_core::pki::{build_hierarchy, verify_chain, CertificateChainFile, HierarchyConfig};
use scms_core::report::{render_lengths, table1_rows, ReportFormat};
use scms_core::sim::{parse_config, run_simulation, ScenarioConfig};
use scms_core::{Error, Provider, SchemeId};

const EXIT_VERIFY_FAILURE: u8 = 1;
const EXIT_CONFIG_ERROR: u8 = 2;

#[derive(Parser)]
#[command(
    name = "scms",
    about = "Hybrid PQC/ECC certificates for a V2X security credential management system",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Md,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> ReportFormat {
        match f {
            Format::Csv => ReportFormat::Csv,
            Format::Md => ReportFormat::Markdown,
        }
    }
}

#[derive(Args)]
struct OutputArg {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the certificate/SPDU length comparison table.
    TableLengths {
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Time keygen/sign/verify for the four signature schemes.
    BenchSign {
        #[arg(long, default_value_t = 100)]
        iters: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Time keygen/encrypt/decrypt for the KEM.
    BenchKem {
        #[arg(long, default_value_t = 100)]
        iters: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Run the end-to-end provisioning and BSM exchange simulation.
    Simulate {
        /// Flat key=value scenario file; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Build a hierarchy and write its certificate chain file.
    CcfExport {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Signature scheme for every authority role.
        #[arg(long, default_value = "falcon512")]
        scheme: String,
        /// Also write each chain certificate as a raw binary file named by
        /// its hex digest in this directory.
        #[arg(long)]
        certs_dir: Option<PathBuf>,
    },
    /// Read a certificate chain file and verify it.
    CcfImport {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

fn emit(output: &OutputArg, text: &str) -> scms_core::Result<()> {
    match &output.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> scms_core::Result<u8> {
    let provider = Provider::standard();
    match cli.command {
        Command::TableLengths { format, output } => {
            emit(&output, &render_lengths(&table1_rows(), format.into()))?;
            Ok(0)
        }
        Command::BenchSign {
            iters,
            format,
            seed,
            output,
        } => {
            if iters == 0 {
                return Err(Error::Config("--iters must be at least 1".into()));
            }
            let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
            let rows = bench_signatures(&provider, iters, &mut rng)?;
            emit(&output, &render_sign_report(&rows, format.into()))?;
            Ok(if rows.iter().all(|r| r.round_trips_ok) {
                0
            } else {
                EXIT_VERIFY_FAILURE
            })
        }
        Command::BenchKem {
            iters,
            format,
            seed,
            output,
        } => {
            if iters == 0 {
                return Err(Error::Config("--iters must be at least 1".into()));
            }
            let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
            let row = bench_kem(&provider, iters, &mut rng)?;
            emit(&output, &render_kem_report(&row, format.into()))?;
            Ok(if row.round_trips_ok {
                0
            } else {
                EXIT_VERIFY_FAILURE
            })
        }
        Command::Simulate {
            config,
            seed,
            output,
        } => {
            let mut scenario = match config {
                Some(path) => {
                    let text = fs::read_to_string(&path).map_err(|e| {
                        Error::Config(format!("cannot read {}: {e}", path.display()))
                    })?;
                    parse_config(&text)?
                }
                None => ScenarioConfig::default(),
            };
            if let Some(seed) = seed {
                scenario.seed = seed;
            }
            let summary = run_simulation(&provider, &scenario)?;
            emit(&output, &summary.render_text())?;
            Ok(if summary.verify_failures == 0 {
                0
            } else {
                EXIT_VERIFY_FAILURE
            })
        }
        Command::CcfExport {
            out,
            seed,
            scheme,
            certs_dir,
        } => {
            let scheme: SchemeId = scheme.parse()?;
            if !scheme.is_signature() {
                return Err(Error::Config(format!(
                    "{scheme} is a KEM; authorities need a signature scheme"
                )));
            }
            let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
            let config = HierarchyConfig::uniform(scheme);
            let hierarchy = build_hierarchy(&provider, &config, &mut rng)?;
            fs::write(&out, hierarchy.ccf.to_bytes()?)?;
            if let Some(dir) = certs_dir {
                fs::create_dir_all(&dir)?;
                for cert in &hierarchy.ccf.certs {
                    scms_core::cert::write_certificate_file(&dir, cert)?;
                }
            }
            eprintln!(
                "wrote {} ({} certificates, root {})",
                out.display(),
                hierarchy.ccf.certs.len(),
                hex::encode(hierarchy.ccf.certs[0].digest())
            );
            Ok(0)
        }
        Command::CcfImport { input } => {
            let bytes = fs::read(&input)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", input.display())))?;
            let ccf = CertificateChainFile::from_bytes(&bytes)?;
            let ok = verify_chain(&provider, &ccf);
            println!(
                "certificates: {}\nroots listed: {}\nchain_valid: {}",
                ccf.certs.len(),
                ccf.ctl.root_digests.len(),
                ok
            );
            Ok(if ok { 0 } else { EXIT_VERIFY_FAILURE })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err @ Error::Config(_)) => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_CONFIG_ERROR)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_VERIFY_FAILURE)
        }
    }
}
