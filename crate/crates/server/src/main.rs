use std::net::SocketAddr;

use clap::Parser;

#[derive(Parser)]
#[command(name = "semipos-server", version, about = "Serve the semipos operations over HTTP/JSON")]
struct Args {
    /// Address to listen on.
    #[arg(long, default_value = "127.0.0.1:8080")]
    addr: SocketAddr,
}

#[tokio::main]
async fn main() -> std::io::Result<()> {
    let args = Args::parse();
    let listener = tokio::net::TcpListener::bind(args.addr).await?;
    eprintln!("semipos-server listening on http://{}", listener.local_addr()?);
    tokio::select! {
        r = semipos_server::serve(listener) => r,
        _ = tokio::signal::ctrl_c() => Ok(()),
    }
}
