fn main() {
    env_logger::init();
    std::process::exit(reconfig_mimo::cli::run(std::env::args_os()));
}
