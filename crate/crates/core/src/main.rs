fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let code = ieval::cli::dispatch(std::env::args_os());
    std::process::exit(code);
}
