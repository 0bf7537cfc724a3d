fn main() {
    std::process::exit(gue_sampler::cli::run(std::env::args_os()));
}
