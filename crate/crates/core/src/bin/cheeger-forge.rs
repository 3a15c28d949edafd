fn main() {
    cheeger_forge::cli::main()
}
