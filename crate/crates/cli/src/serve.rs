use std::sync::Arc;

use hybridauth_service::http::serve;
use hybridauth_service::{setup, AuthService, LockoutPolicy, ServiceConfig, Store};
use serde_json::json;

use crate::args::ServeArgs;
use crate::io::read_to_string;
use crate::params::scheme_params;
use crate::simulate::symbol_set;
use crate::{CliError, Report};

pub fn service_from_args(args: &ServeArgs, seed: Option<u64>) -> Result<AuthService, CliError> {
    let params = scheme_params(args.params)?
        .with_gamma(args.gamma)
        .and_then(|p| p.with_t(args.t))
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let pool: Vec<String> = match &args.pool {
        Some(path) => serde_json::from_str(&read_to_string(path)?)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?,
        None => (0..params.n()).map(|i| format!("emoji/{i}.png")).collect(),
    };
    let published = setup(params, symbol_set(args.symbols, args.params.d), pool).map_err(CliError::data)?;
    let mut config = ServiceConfig::new(published);
    config.lockout = LockoutPolicy {
        max_consecutive_rejects: args.max_consecutive_rejects,
        max_open_sessions: args.max_open_sessions,
    };
    let store = match &args.store {
        Some(path) => Store::open(path).map_err(CliError::data)?,
        None => Store::memory(),
    };
    AuthService::new(config, store, seed).map_err(CliError::data)
}

/// Blocks until the server stops. Session ids and challenges come from the
/// OS entropy source unless `--seed` is non-zero.
pub fn cmd_serve(args: &ServeArgs, seed: u64) -> Result<Report, CliError> {
    let service = Arc::new(service_from_args(args, (seed != 0).then_some(seed))?);
    eprintln!("listening on http://{}", args.addr);
    let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build().map_err(CliError::data)?;
    runtime.block_on(serve(service, args.addr)).map_err(CliError::data)?;
    Ok(Report { json: json!({ "stopped": true }), text: "server stopped\n".into() })
}
