//! `aee`: file-based operator tool for the AEE group signature lifecycle.
//!
//! Every artifact (keys, requests, signatures, proofs) is written in a
//! versioned binary framing, either as lower-case hex (default) or raw
//! bytes with `--mode bin`. Readers accept both. The registration table
//! is always binary.
//!
//! Exit codes: 0 success or accept, 1 reject (including "not linked" and
//! "untraceable"), 2 operational error.

pub mod bench;

use std::fs::{self, File, OpenOptions};
use std::io::{self, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aee_core::algebra::BilinearSuite;
use aee_core::enroll::{issue, join_finish, join_start, verify_join_request, MemberId, RegistrationTable};
use aee_core::eventsig::{epk_from_signature, esign, ever, EventSignature};
use aee_core::groupsig::{gsign, gver, precompute_context, precompute_event_schedule, EventId, GroupSignature};
use aee_core::keys::{gset, ukg, GroupPublicKey, MasterIssuingKey, MasterOpeningKey, UserKeyPair};
use aee_core::linktrace::{judge, link, open, OpenOutcome, TracingProof};
use aee_core::prelude::{GroupSigningKey, IssueResponse, JoinRequest};
use aee_core::wire::{from_framed, to_framed, DecodeError, Wire};
use aee_sim::{EventMode, EventSchedule, Scenario, SimConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: cannot decode {what}: {source}")]
    Decode {
        path: PathBuf,
        what: &'static str,
        source: DecodeError,
    },
    #[error("{0}")]
    Core(#[from] aee_core::Error),
    #[error("{0}")]
    Sim(#[from] aee_sim::SimError),
    #[error("{path}: {source}")]
    Registry {
        path: PathBuf,
        source: aee_core::enroll::RegistryError,
    },
    #[error("{0}")]
    Usage(String),
}

/// Result of a command that decides something.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Accept
        } else {
            Verdict::Reject
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Verdict::Accept => 0,
            Verdict::Reject => 1,
        }
    }
}

pub const EXIT_ERROR: u8 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputMode {
    #[default]
    Hex,
    Bin,
}

#[derive(Debug, Parser)]
#[command(name = "aee", version, about = "Anonymous event-linkable group signatures for V2X")]
pub struct Cli {
    /// Artifact encoding for files this command writes.
    #[arg(long, value_enum, default_value_t, global = true)]
    pub mode: OutputMode,
    /// Fixed RNG seed. Only present in builds with the `insecure-seed`
    /// feature; reusing nonces across signatures leaks keys.
    #[cfg(feature = "insecure-seed")]
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SignedMessage {
    /// Event identifier.
    #[arg(long)]
    pub et: String,
    /// File holding the signed message bytes.
    #[arg(long)]
    pub msg: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate group keys and an empty registration table.
    Setup {
        #[arg(long)]
        gpk: PathBuf,
        #[arg(long)]
        mik: PathBuf,
        #[arg(long)]
        mok: PathBuf,
        #[arg(long)]
        reg: Option<PathBuf>,
    },
    /// Generate a user key pair.
    Ukg {
        #[arg(long)]
        gpk: PathBuf,
        #[arg(long)]
        usk: PathBuf,
    },
    /// Start joining: write a join request for the issuer.
    JoinStart {
        #[arg(long)]
        gpk: PathBuf,
        #[arg(long)]
        usk: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Issuer side: check a join request and issue a credential.
    Issue {
        #[arg(long)]
        gpk: PathBuf,
        #[arg(long)]
        mik: PathBuf,
        #[arg(long)]
        reg: PathBuf,
        #[arg(long)]
        member: String,
        #[arg(long)]
        req: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Finish joining: check the issued credential and write the signing key.
    JoinFinish {
        #[arg(long)]
        gpk: PathBuf,
        #[arg(long)]
        usk: PathBuf,
        #[arg(long)]
        resp: PathBuf,
        #[arg(long)]
        gsk: PathBuf,
    },
    /// Group-sign a message for an event.
    Gsign {
        #[arg(long)]
        gpk: PathBuf,
        #[arg(long)]
        gsk: PathBuf,
        #[command(flatten)]
        message: SignedMessage,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a group signature.
    Gver {
        #[arg(long)]
        gpk: PathBuf,
        #[command(flatten)]
        message: SignedMessage,
        #[arg(long)]
        sig: PathBuf,
    },
    /// Event-sign a message under the token of an earlier group signature.
    Esign {
        #[arg(long)]
        gpk: PathBuf,
        #[arg(long)]
        usk: PathBuf,
        #[command(flatten)]
        message: SignedMessage,
        /// The group signature that introduced the token for this event.
        #[arg(long)]
        sig: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify an event signature against the token of a group signature.
    Ever {
        #[arg(long)]
        gpk: PathBuf,
        #[command(flatten)]
        message: SignedMessage,
        /// The group signature carrying the token.
        #[arg(long)]
        sig: PathBuf,
        #[arg(long)]
        esig: PathBuf,
    },
    /// Decide whether two group signatures for one event share a signer.
    Link {
        #[arg(long)]
        gpk: PathBuf,
        #[arg(long)]
        et: String,
        /// The two messages, in the order of `--sig`.
        #[arg(long, num_args = 2, required = true)]
        msg: Vec<PathBuf>,
        #[arg(long, num_args = 2, required = true)]
        sig: Vec<PathBuf>,
    },
    /// Opener side: identify the signer and write a tracing proof.
    Open {
        #[arg(long)]
        gpk: PathBuf,
        #[arg(long)]
        mok: PathBuf,
        #[arg(long)]
        reg: PathBuf,
        #[command(flatten)]
        message: SignedMessage,
        #[arg(long)]
        sig: PathBuf,
        #[arg(long)]
        proof: PathBuf,
    },
    /// Check a tracing proof that names `member` as the signer.
    Judge {
        #[arg(long)]
        gpk: PathBuf,
        #[arg(long)]
        reg: PathBuf,
        #[arg(long)]
        member: String,
        #[arg(long)]
        sig: PathBuf,
        #[arg(long)]
        proof: PathBuf,
    },
    /// Sign an empty message for every time slot ahead of time.
    Precompute {
        #[arg(long)]
        gpk: PathBuf,
        #[arg(long)]
        gsk: PathBuf,
        /// First slot, YYYYMMDDhhmm.
        #[arg(long)]
        start: String,
        #[arg(long, default_value_t = 144)]
        slots: usize,
        #[arg(long, default_value_t = 600)]
        slot_s: u64,
        /// Output directory; one `<et>.sig` file per slot.
        #[arg(long)]
        out: PathBuf,
    },
    /// Host timing profile with operation counts and encoded sizes.
    Bench {
        #[arg(long, default_value_t = bench::DEFAULT_ITERATIONS)]
        iters: usize,
    },
    /// Run the V2X simulator.
    Sim {
        #[arg(long, value_enum)]
        scenario: Option<SimScenario>,
        /// TOML configuration; missing keys take their defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Emit `section,key,value` rows instead of the text summary.
        #[arg(long)]
        rows: bool,
        /// Also print host wall-clock timings to stderr.
        #[arg(long)]
        timings: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SimScenario {
    Intersection,
    Cam,
}

/// Parses arguments and runs; the returned code is the process exit code.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(verdict) => ExitCode::from(verdict.exit_code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn rng_for(cli: &Cli) -> ChaCha20Rng {
    #[cfg(feature = "insecure-seed")]
    if let Some(seed) = cli.seed {
        return ChaCha20Rng::seed_from_u64(seed);
    }
    let _ = cli;
    ChaCha20Rng::from_entropy()
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(io_err(path))
}

/// Hex text if the file is entirely hex digits and whitespace, otherwise
/// raw framed bytes. Framed bytes start with the version byte 0x01, which
/// is never a hex digit, so the two never overlap.
fn decode_artifact<T: Wire>(bytes: &[u8]) -> Result<T, DecodeError> {
    let is_text = !bytes.is_empty() && bytes.iter().all(|b| b.is_ascii_hexdigit() || b.is_ascii_whitespace());
    if is_text {
        let text: String = bytes.iter().filter(|b| !b.is_ascii_whitespace()).map(|&b| b as char).collect();
        let raw = hex::decode(text).map_err(|_| DecodeError::Hex)?;
        from_framed(&raw)
    } else {
        from_framed(bytes)
    }
}

fn read_artifact<T: Wire>(path: &Path, what: &'static str) -> Result<T, CliError> {
    decode_artifact(&read_bytes(path)?).map_err(|source| CliError::Decode {
        path: path.to_path_buf(),
        what,
        source,
    })
}

/// Reads an artifact under test: a file that does not decode is a reject,
/// not an operational error. Missing files are still errors.
fn read_candidate<T: Wire>(path: &Path, what: &str) -> Result<Option<T>, CliError> {
    match decode_artifact(&read_bytes(path)?) {
        Ok(v) => Ok(Some(v)),
        Err(e) => {
            eprintln!("reject: {}: malformed {what}: {e}", path.display());
            Ok(None)
        }
    }
}

fn encode_artifact<T: Wire>(value: &T, mode: OutputMode) -> Vec<u8> {
    match mode {
        OutputMode::Hex => {
            let mut text = hex::encode(to_framed(value)).into_bytes();
            text.push(b'\n');
            text
        }
        OutputMode::Bin => to_framed(value),
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(io_err(path))
}

/// Writes to `out` or, without one, to stdout.
fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => write_file(path, bytes),
        None => io::stdout().write_all(bytes).map_err(io_err(Path::new("<stdout>"))),
    }
}

fn create_new(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let mut f = OpenOptions::new().write(true).create_new(true).open(path).map_err(io_err(path))?;
    f.write_all(bytes).map_err(io_err(path))
}

fn parse_event(et: &str) -> Result<EventId, CliError> {
    et.parse().map_err(|_| CliError::Usage("--et must not be empty".into()))
}

fn load_gpk(path: &Path) -> Result<GroupPublicKey, CliError> {
    let gpk: GroupPublicKey = read_artifact(path, "group public key")?;
    gpk.validate()?;
    Ok(gpk)
}

fn load_registry(path: &Path) -> Result<RegistrationTable, CliError> {
    let file = File::open(path).map_err(io_err(path))?;
    file.lock_shared().map_err(io_err(path))?;
    let table = RegistrationTable::load(&file).map_err(io_err(path))?;
    table.map_err(|source| CliError::Registry {
        path: path.to_path_buf(),
        source,
    })
}

fn print_verdict(verdict: Verdict, what: &str) -> Verdict {
    match verdict {
        Verdict::Accept => println!("accept"),
        Verdict::Reject => println!("reject: {what}"),
    }
    verdict
}

pub fn execute(cli: &Cli) -> Result<Verdict, CliError> {
    let mode = cli.mode;
    match &cli.command {
        Command::Setup { gpk, mik, mok, reg } => {
            let mut rng = rng_for(cli);
            let (pk, ik, ok) = gset(&mut rng, &BilinearSuite::bls12_381())?;
            create_new(gpk, &encode_artifact(&pk, mode))?;
            create_new(mik, &encode_artifact(&ik, mode))?;
            create_new(mok, &encode_artifact(&ok, mode))?;
            if let Some(reg) = reg {
                create_new(reg, &RegistrationTable::new().to_bytes())?;
            }
            Ok(Verdict::Accept)
        }
        Command::Ukg { gpk, usk } => {
            let gpk = load_gpk(gpk)?;
            let keys = ukg(&mut rng_for(cli), &gpk)?;
            create_new(usk, &encode_artifact(&keys, mode))?;
            Ok(Verdict::Accept)
        }
        Command::JoinStart { gpk, usk, out } => {
            let gpk = load_gpk(gpk)?;
            let keys: UserKeyPair = read_artifact(usk, "user key pair")?;
            if !keys.matches(&gpk) {
                return Err(aee_core::Error::KeyMismatch("user key pair does not match the group key").into());
            }
            let (req, _) = join_start(&gpk, &keys, &mut rng_for(cli))?;
            write_file(out, &encode_artifact(&req, mode))?;
            Ok(Verdict::Accept)
        }
        Command::Issue {
            gpk,
            mik,
            reg,
            member,
            req,
            out,
        } => {
            let gpk = load_gpk(gpk)?;
            let mik: MasterIssuingKey = read_artifact(mik, "master issuing key")?;
            let Some(req) = read_candidate::<JoinRequest>(req, "join request")? else {
                return Ok(Verdict::Reject);
            };
            if !verify_join_request(&gpk, &req) {
                return Ok(print_verdict(Verdict::Reject, "join proof does not verify"));
            }
            let member = MemberId::new(member.as_bytes().to_vec());
            let resp = issue_locked(&gpk, &mik, reg, &member, &req, &mut rng_for(cli))?;
            write_file(out, &encode_artifact(&resp, mode))?;
            Ok(Verdict::Accept)
        }
        Command::JoinFinish { gpk, usk, resp, gsk } => {
            let gpk = load_gpk(gpk)?;
            let keys: UserKeyPair = read_artifact(usk, "user key pair")?;
            let Some(resp) = read_candidate::<IssueResponse>(resp, "issue response")? else {
                return Ok(Verdict::Reject);
            };
            match join_finish(&gpk, &keys, &resp) {
                Ok(key) => {
                    write_file(gsk, &encode_artifact(&key, mode))?;
                    Ok(Verdict::Accept)
                }
                Err(aee_core::Error::InvalidCredential) => Ok(print_verdict(Verdict::Reject, "credential does not verify")),
                Err(e) => Err(e.into()),
            }
        }
        Command::Gsign {
            gpk,
            gsk,
            message,
            out,
        } => {
            let gpk = load_gpk(gpk)?;
            let gsk: GroupSigningKey = read_artifact(gsk, "group signing key")?;
            if !gsk.is_valid(&gpk) {
                return Err(aee_core::Error::InvalidCredential.into());
            }
            let et = parse_event(&message.et)?;
            let m = read_bytes(&message.msg)?;
            let ctx = precompute_context(&gpk, &gsk);
            let sigma = gsign(&gpk, &gsk, &ctx, &et, &m, &mut rng_for(cli))?;
            emit(out.as_deref(), &encode_artifact(&sigma, mode))?;
            Ok(Verdict::Accept)
        }
        Command::Gver { gpk, message, sig } => {
            let gpk = load_gpk(gpk)?;
            let et = parse_event(&message.et)?;
            let m = read_bytes(&message.msg)?;
            let Some(sigma) = read_candidate::<GroupSignature>(sig, "group signature")? else {
                return Ok(Verdict::Reject);
            };
            Ok(print_verdict(Verdict::from_bool(gver(&gpk, &et, &m, &sigma)), "group signature"))
        }
        Command::Esign {
            gpk,
            usk,
            message,
            sig,
            out,
        } => {
            let gpk = load_gpk(gpk)?;
            let keys: UserKeyPair = read_artifact(usk, "user key pair")?;
            let sigma: GroupSignature = read_artifact(sig, "group signature")?;
            let et = parse_event(&message.et)?;
            let m_e = read_bytes(&message.msg)?;
            let epk = epk_from_signature(&gpk, &et, &sigma);
            if epk.base().pow(&keys.usk) != sigma.t {
                return Err(CliError::Usage(format!(
                    "{}: token does not belong to this key for event {et}",
                    sig.display()
                )));
            }
            let sig = esign(&gpk, &keys.usk, &et, &epk, &m_e, &mut rng_for(cli))?;
            emit(out.as_deref(), &encode_artifact(&sig, mode))?;
            Ok(Verdict::Accept)
        }
        Command::Ever { gpk, message, sig, esig } => {
            let gpk = load_gpk(gpk)?;
            let et = parse_event(&message.et)?;
            let m_e = read_bytes(&message.msg)?;
            let Some(sigma) = read_candidate::<GroupSignature>(sig, "group signature")? else {
                return Ok(Verdict::Reject);
            };
            let Some(esig) = read_candidate::<EventSignature>(esig, "event signature")? else {
                return Ok(Verdict::Reject);
            };
            let epk = epk_from_signature(&gpk, &et, &sigma);
            Ok(print_verdict(Verdict::from_bool(ever(&gpk, &et, &epk, &m_e, &esig)), "event signature"))
        }
        Command::Link { gpk, et, msg, sig } => {
            let gpk = load_gpk(gpk)?;
            let et = parse_event(et)?;
            let m0 = read_bytes(&msg[0])?;
            let m1 = read_bytes(&msg[1])?;
            let (Some(s0), Some(s1)) = (
                read_candidate::<GroupSignature>(&sig[0], "group signature")?,
                read_candidate::<GroupSignature>(&sig[1], "group signature")?,
            ) else {
                return Ok(Verdict::Reject);
            };
            for (s, m, path) in [(&s0, &m0, &sig[0]), (&s1, &m1, &sig[1])] {
                if !gver(&gpk, &et, m, s) {
                    println!("reject: {} does not verify", path.display());
                    return Ok(Verdict::Reject);
                }
            }
            if link(&et, &m0, &s0, &m1, &s1).linked {
                println!("linked");
                Ok(Verdict::Accept)
            } else {
                println!("not linked");
                Ok(Verdict::Reject)
            }
        }
        Command::Open {
            gpk,
            mok,
            reg,
            message,
            sig,
            proof,
        } => {
            let gpk = load_gpk(gpk)?;
            let mok: MasterOpeningKey = read_artifact(mok, "master opening key")?;
            if !mok.matches(&gpk) {
                return Err(aee_core::Error::KeyMismatch("opening key does not match the group key").into());
            }
            let reg = load_registry(reg)?;
            let et = parse_event(&message.et)?;
            let m = read_bytes(&message.msg)?;
            let Some(sigma) = read_candidate::<GroupSignature>(sig, "group signature")? else {
                return Ok(Verdict::Reject);
            };
            match open(&gpk, &mok, &reg, &et, &m, &sigma, &mut rng_for(cli)) {
                Ok(OpenOutcome::Traced { member, proof: pi }) => {
                    write_file(proof, &encode_artifact(&pi, mode))?;
                    println!("{member}");
                    Ok(Verdict::Accept)
                }
                Ok(OpenOutcome::Untraceable) => Ok(print_verdict(Verdict::Reject, "signer is not registered")),
                Err(aee_core::Error::InvalidSignature) => Ok(print_verdict(Verdict::Reject, "group signature")),
                Err(e) => Err(e.into()),
            }
        }
        Command::Judge {
            gpk,
            reg,
            member,
            sig,
            proof,
        } => {
            let gpk = load_gpk(gpk)?;
            let reg = load_registry(reg)?;
            let member = MemberId::new(member.as_bytes().to_vec());
            let Some(row) = reg.get(&member) else {
                return Err(CliError::Usage(format!("member {member} is not registered")));
            };
            let Some(sigma) = read_candidate::<GroupSignature>(sig, "group signature")? else {
                return Ok(Verdict::Reject);
            };
            let Some(pi) = read_candidate::<TracingProof>(proof, "tracing proof")? else {
                return Ok(Verdict::Reject);
            };
            Ok(print_verdict(
                Verdict::from_bool(judge(&gpk, &member, &row.upk, &sigma, &pi)),
                "tracing proof",
            ))
        }
        Command::Precompute {
            gpk,
            gsk,
            start,
            slots,
            slot_s,
            out,
        } => {
            let gpk = load_gpk(gpk)?;
            let gsk: GroupSigningKey = read_artifact(gsk, "group signing key")?;
            if !gsk.is_valid(&gpk) {
                return Err(aee_core::Error::InvalidCredential.into());
            }
            let schedule = EventSchedule::new(EventMode::Timeslot, start, *slot_s, *slots)?;
            let ctx = precompute_context(&gpk, &gsk);
            let signed = precompute_event_schedule(&gpk, &gsk, &ctx, &schedule.events(), &mut rng_for(cli))?;
            fs::create_dir_all(out).map_err(io_err(out))?;
            for entry in &signed {
                let path = out.join(format!("{}.sig", entry.et));
                write_file(&path, &encode_artifact(&entry.sigma, mode))?;
            }
            println!("{} signatures in {}", signed.len(), out.display());
            Ok(Verdict::Accept)
        }
        Command::Bench { iters } => {
            if *iters < bench::MIN_ITERATIONS {
                return Err(CliError::Usage(format!("--iters must be at least {}", bench::MIN_ITERATIONS)));
            }
            let report = bench::run(*iters, &mut rng_for(cli))?;
            print!("{report}");
            Ok(Verdict::Accept)
        }
        Command::Sim {
            scenario,
            config,
            rows,
            timings,
            out,
        } => {
            let mut cfg = match config {
                Some(path) => {
                    let text = fs::read_to_string(path).map_err(io_err(path))?;
                    SimConfig::from_toml(&text)?
                }
                None => SimConfig::default(),
            };
            if let Some(s) = scenario {
                cfg.scenario = match s {
                    SimScenario::Intersection => Scenario::Intersection,
                    SimScenario::Cam => Scenario::Cam,
                };
            }
            let run = aee_sim::run(&cfg)?;
            let text = if *rows { run.report.to_rows() } else { run.report.to_text() };
            emit(out.as_deref(), text.as_bytes())?;
            if *timings {
                eprint!("{}", run.timings.to_text());
            }
            Ok(Verdict::Accept)
        }
    }
}

/// Issues under an exclusive lock on the registration file so concurrent
/// issuers cannot both claim a member id or lose each other's rows.
fn issue_locked(
    gpk: &GroupPublicKey,
    mik: &MasterIssuingKey,
    path: &Path,
    member: &MemberId,
    req: &JoinRequest,
    rng: &mut ChaCha20Rng,
) -> Result<IssueResponse, CliError> {
    let mut file = OpenOptions::new().read(true).write(true).open(path).map_err(io_err(path))?;
    file.lock().map_err(io_err(path))?;
    let mut bytes = Vec::new();
    file.read_to_end(&mut bytes).map_err(io_err(path))?;
    let mut reg = RegistrationTable::from_bytes(&bytes).map_err(|source| CliError::Registry {
        path: path.to_path_buf(),
        source,
    })?;
    let resp = issue(gpk, mik, &mut reg, member, req, rng)?;
    file.seek(SeekFrom::Start(0)).map_err(io_err(path))?;
    file.set_len(0).map_err(io_err(path))?;
    file.write_all(&reg.to_bytes()).map_err(io_err(path))?;
    file.sync_all().map_err(io_err(path))?;
    Ok(resp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use aee_core::algebra::G1Element;

    #[test]
    fn artifacts_decode_from_hex_and_binary() {
        let p = G1Element::generator();
        let hex = encode_artifact(&p, OutputMode::Hex);
        let bin = encode_artifact(&p, OutputMode::Bin);
        assert_eq!(decode_artifact::<G1Element>(&hex).unwrap(), p);
        assert_eq!(decode_artifact::<G1Element>(&bin).unwrap(), p);
        assert!(decode_artifact::<G1Element>(b"").is_err());
        assert!(decode_artifact::<G1Element>(b"0").is_err());
    }

    #[test]
    fn argument_surface() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
        let names: Vec<String> = Cli::command().get_subcommands().map(|c| c.get_name().to_string()).collect();
        assert_eq!(
            names,
            [
                "setup",
                "ukg",
                "join-start",
                "issue",
                "join-finish",
                "gsign",
                "gver",
                "esign",
                "ever",
                "link",
                "open",
                "judge",
                "precompute",
                "bench",
                "sim"
            ]
        );
    }

    #[cfg(not(feature = "insecure-seed"))]
    #[test]
    fn production_builds_refuse_a_fixed_seed() {
        assert!(Cli::try_parse_from(["aee", "--seed", "1", "bench"]).is_err());
    }

    #[cfg(feature = "insecure-seed")]
    #[test]
    fn seeded_builds_are_reproducible() {
        let cli = Cli::try_parse_from(["aee", "--seed", "7", "bench"]).unwrap();
        use rand::RngCore;
        assert_eq!(rng_for(&cli).next_u64(), rng_for(&cli).next_u64());
    }
}
