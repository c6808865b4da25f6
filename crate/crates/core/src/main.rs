fn main() {
    let threads = std::env::var(heatconv::cli::THREADS_ENV).ok();
    std::process::exit(heatconv::cli::main_entry(std::env::args_os(), threads));
}
