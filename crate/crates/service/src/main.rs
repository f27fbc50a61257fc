use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use roto_service::{router, AppState};
use tracing_subscriber::EnvFilter;

/// Draft assistant HTTP service.
#[derive(Debug, Parser)]
#[command(name = "roto-service", version)]
struct Args {
    /// Address to listen on.
    #[arg(long, env = "ROTO_BIND", default_value = "127.0.0.1:8080")]
    bind: SocketAddr,
    /// Snapshot file; leagues are restored from it at startup and saved
    /// after every change.
    #[arg(long, env = "ROTO_SNAPSHOT")]
    snapshot: Option<PathBuf>,
}

#[tokio::main]
async fn main() -> ExitCode {
    let args = Args::parse();
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info")))
        .with_writer(std::io::stderr)
        .init();

    let state = match args.snapshot {
        Some(path) => match AppState::with_snapshot(path) {
            Ok(s) => s,
            Err(e) => {
                tracing::error!("loading snapshot: {e}");
                return ExitCode::from(1);
            }
        },
        None => AppState::new(),
    };
    let listener = match tokio::net::TcpListener::bind(args.bind).await {
        Ok(l) => l,
        Err(e) => {
            tracing::error!("binding {}: {e}", args.bind);
            return ExitCode::from(2);
        }
    };
    tracing::info!("listening on {}", args.bind);
    let shutdown = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    if let Err(e) = axum::serve(listener, router(state))
        .with_graceful_shutdown(shutdown)
        .await
    {
        tracing::error!("server error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
