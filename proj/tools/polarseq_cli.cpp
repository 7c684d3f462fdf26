// Command-line front end: construct | bias | encode | decode | simulate.
//
// Conventions:
//   - bare key=value arguments are accepted as shorthand for --key=value
//   - the effective configuration (defaults included) and its hash go to
//     stderr; the primary artifact (spec text, bits, CSV) goes to stdout
//   - exit codes: 0 success, 1 validation/numerical failure, 2 usage error,
//     3 file I/O failure

#include <CLI11.hpp>

#include <cctype>
#include <cinttypes>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "polarseq/bias.hpp"
#include "polarseq/channel.hpp"
#include "polarseq/code_spec.hpp"
#include "polarseq/construct.hpp"
#include "polarseq/decoders.hpp"
#include "polarseq/errors.hpp"
#include "polarseq/harness.hpp"

namespace {

using namespace polarseq;

constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

// Missing conditionally-required flags (CLI11 can only require unconditionally).
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Prints every effective setting, then a hash of the whole configuration so
// a run can be reproduced from its log.
class ConfigEcho {
   public:
    explicit ConfigEcho(std::string command) : command_(std::move(command)) {}

    void add(const std::string& key, const std::string& value) {
        items_.emplace_back(key, value);
    }
    void add(const std::string& key, double value) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", value);
        add(key, std::string(buf));
    }
    template <typename T>
    void add(const std::string& key, T value)
        requires std::is_integral_v<T>
    {
        add(key, std::to_string(value));
    }

    void print() const {
        std::string canonical = "polarseq " + command_ + "\n";
        std::fprintf(stderr, "polarseq %s\n", command_.c_str());
        for (const auto& [key, value] : items_) {
            std::fprintf(stderr, "  %s = %s\n", key.c_str(), value.c_str());
            canonical += key + "=" + value + "\n";
        }
        std::fprintf(stderr, "config_hash=0x%016" PRIx64 "\n", fnv1a(canonical));
    }

   private:
    std::string command_;
    std::vector<std::pair<std::string, std::string>> items_;
};

std::vector<std::uint8_t> parse_bits(const std::string& text) {
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1')
            throw std::invalid_argument("bit strings may only contain 0 and 1");
        bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return bits;
}

std::string bits_to_string(const std::vector<std::uint8_t>& bits) {
    std::string out;
    out.reserve(bits.size());
    for (std::uint8_t b : bits) out += static_cast<char>('0' + b);
    return out;
}

std::vector<double> parse_llrs(const std::string& text) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        const std::string item = text.substr(pos, next - pos);
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw std::invalid_argument("not a number in LLR list: '" + item + "'");
        }
        pos = next + 1;
    }
    if (values.empty()) throw std::invalid_argument("empty LLR list");
    return values;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])) != 0) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])) != 0) --e;
    return s.substr(b, e - b);
}

// Expands `--config FILE` in place: each `key=value` (or `key value`) line of
// the file becomes a `--key=value` token. Keys also given on the command line
// keep their command-line value. Returns the file path, empty if none given.
std::string expand_config_file(std::vector<std::string>& args) {
    std::size_t at = args.size();
    std::string path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            at = i;
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                       args.begin() + static_cast<std::ptrdiff_t>(i + 2));
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            at = i;
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (path.empty()) return path;

    std::set<std::string> given;
    for (const std::string& a : args)
        if (a.rfind("--", 0) == 0) given.insert(a.substr(2, std::min(a.find('='), a.size()) - 2));

    std::ifstream file(path);
    if (!file) throw IoError("cannot open for reading: " + path);
    std::vector<std::string> extra;
    std::string line;
    while (std::getline(file, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        std::size_t cut = line.find('=');
        if (cut == std::string::npos) cut = line.find_first_of(" \t");
        const std::string key = trim(line.substr(0, std::min(cut, line.size())));
        if (key.empty()) throw std::invalid_argument("malformed config line: '" + line + "'");
        if (given.count(key) != 0) continue;
        if (cut == std::string::npos)
            extra.push_back("--" + key);  // a bare flag such as bias-auto
        else
            extra.push_back("--" + key + "=" + trim(line.substr(cut + 1)));
    }
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), extra.begin(), extra.end());
    return path;
}

// Accepts `key=value` as shorthand for `--key=value` (the subcommand word and
// anything already starting with '-' pass through untouched).
std::vector<std::string> map_bare_assignments(int argc, char** argv) {
    std::vector<std::string> args;
    args.reserve(static_cast<std::size_t>(argc));
    for (int i = 0; i < argc; ++i) {
        std::string arg = argv[i];
        const std::size_t eq = arg.find('=');
        bool bare_key = i > 0 && eq != std::string::npos && eq > 0 && arg[0] != '-' &&
                        (std::isalpha(static_cast<unsigned char>(arg[0])) != 0);
        for (std::size_t j = 0; bare_key && j < eq; ++j) {
            const char c = arg[j];
            bare_key = std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '-' || c == '_';
        }
        args.push_back(bare_key ? "--" + arg : arg);
    }
    return args;
}

struct ConstructArgs {
    std::string kind;
    unsigned m = 0;
    std::size_t k = 0;
    unsigned d = 0;
    std::string base;
    std::size_t extra = 0;
    double snr_db = 2.0;
    std::size_t frames = 100000;
    std::uint64_t seed = 1;
    std::string out;
    bool have_m = false, have_k = false, have_d = false;
};

void run_construct(const ConstructArgs& a) {
    ConfigEcho echo("construct");
    echo.add("kind", a.kind);
    CodeSpec spec(1, {});
    if (a.kind == "polar") {
        if (!a.have_m || !a.have_k) throw UsageError("construct polar needs --m and --k");
        echo.add("m", a.m);
        echo.add("k", a.k);
        echo.add("snr-db", a.snr_db);
        echo.add("frames", a.frames);
        echo.add("seed", a.seed);
        echo.add("out", a.out);
        echo.print();
        const double n = static_cast<double>(std::size_t{1} << a.m);
        const double rate = static_cast<double>(a.k) / n;
        const double sigma = rate > 0.0 ? eb_n0_to_sigma(a.snr_db, rate) : 1.0;
        spec = construct_polar(a.m, a.k, reliability_genie_mc(a.m, sigma, a.frames, a.seed));
    } else if (a.kind == "ebch") {
        if (!a.have_m || !a.have_d) throw UsageError("construct ebch needs --m and --d");
        echo.add("m", a.m);
        echo.add("d", a.d);
        echo.add("out", a.out);
        echo.print();
        spec = construct_ebch_subcode(a.m, a.d);
    } else {  // randomized
        if (a.base.empty()) throw UsageError("construct randomized needs --base");
        echo.add("base", a.base);
        echo.add("extra", a.extra);
        echo.add("seed", a.seed);
        echo.add("out", a.out);
        echo.print();
        spec = construct_randomized_subcode(CodeSpec::load(a.base), a.extra, a.seed);
    }
    spec.save(a.out);
    std::printf("n=%zu k=%zu dynamic_rows=%zu\n", spec.n(), spec.k(), spec.dynamic_row_count());
}

struct BiasArgs {
    std::string method;
    unsigned m = 0;
    double sigma = 0.0;
    std::size_t frames = 100000;
    std::uint64_t seed = 1;
    double half_width = 60.0;
    double step = 1.0 / 16.0;
    double tail_tol = 1e-6;
    std::string out;
    std::string compare;
};

void run_bias(const BiasArgs& a) {
    ConfigEcho echo("bias");
    echo.add("method", a.method);
    echo.add("m", a.m);
    echo.add("sigma", a.sigma);
    if (a.method == "mc") {
        echo.add("frames", a.frames);
        echo.add("seed", a.seed);
    } else {
        echo.add("half-width", a.half_width);
        echo.add("step", a.step);
        echo.add("tail-tol", a.tail_tol);
    }
    echo.add("out", a.out);
    if (!a.compare.empty()) echo.add("compare", a.compare);
    echo.print();

    BiasTable table;
    double max_se = 0.0;
    if (a.method == "de") {
        table = bias_de(a.m, a.sigma, GridParams{a.half_width, a.step, a.tail_tol});
    } else {
        McBiasResult r = bias_mc(a.m, a.sigma, a.frames, a.seed);
        table = std::move(r.table);
        for (double se : r.std_error) max_se = std::max(max_se, se);
    }
    table.save(a.out);
    std::printf("psi_n=%.6g\n", table.values.back());
    if (a.method == "mc") std::printf("max_std_error=%.6g\n", max_se);
    if (!a.compare.empty()) {
        const BiasTable other = BiasTable::load(a.compare);
        if (other.m != table.m)
            throw std::invalid_argument("cannot compare bias tables of different lengths");
        double max_diff = 0.0;
        for (std::size_t phi = 0; phi < table.values.size(); ++phi)
            max_diff = std::max(max_diff, std::abs(table.values[phi] - other.values[phi]));
        std::printf("max_abs_diff=%.6g\n", max_diff);
    }
}

struct EncodeArgs {
    std::string spec_path;
    std::string info;
};

void run_encode(const EncodeArgs& a) {
    ConfigEcho echo("encode");
    echo.add("spec", a.spec_path);
    echo.add("info", a.info);
    echo.print();
    const CodeSpec spec = CodeSpec::load(a.spec_path);
    const std::vector<std::uint8_t> info = parse_bits(a.info);
    if (info.size() != spec.k())
        throw std::invalid_argument("info length " + std::to_string(info.size()) +
                                    " does not match k = " + std::to_string(spec.k()));
    std::printf("%s\n", bits_to_string(spec.encode(info)).c_str());
}

struct DecodeArgs {
    std::string spec_path;
    std::string llrs;
    std::string decoder = "sc";
    std::size_t list_size = 8;
    std::size_t budget = 8;
    std::size_t capacity = 64;
    std::string bias_path;
};

void run_decode(const DecodeArgs& a) {
    ConfigEcho echo("decode");
    echo.add("spec", a.spec_path);
    echo.add("decoder", a.decoder);
    if (a.decoder == "scl") echo.add("list", a.list_size);
    if (a.decoder == "seq") {
        echo.add("budget", a.budget);
        echo.add("capacity", a.capacity);
        echo.add("bias", a.bias_path);
    }
    echo.print();

    const CodeSpec spec = CodeSpec::load(a.spec_path);
    const std::vector<double> llrs = parse_llrs(a.llrs);
    DecodeResult r;
    if (a.decoder == "sc") {
        r = sc_decode(llrs, spec);
    } else if (a.decoder == "scl") {
        r = scl_decode(llrs, spec, a.list_size);
    } else {
        if (a.bias_path.empty())
            throw std::invalid_argument(
                "seq decoding requires --bias: a score bias table built for this code "
                "length and the channel noise level");
        const BiasTable bias = BiasTable::load(a.bias_path);
        r = seq_decode(llrs, spec, SeqConfig{a.budget, a.capacity, &bias, nullptr});
    }
    std::printf("status=%s\n", r.status == DecodeStatus::decoded ? "decoded" : "abandoned");
    std::printf("info=%s\n", bits_to_string(r.info_estimate).c_str());
    std::printf("codeword=%s\n", bits_to_string(r.codeword).c_str());
    std::printf("iterations=%zu ops=%llu peak_queue=%zu\n", r.stats.iterations,
                static_cast<unsigned long long>(r.stats.total_ops()), r.stats.peak_queue);
}

struct SimulateArgs {
    std::string spec_path;
    std::string decoder = "sc";
    std::size_t list_size = 8;
    std::size_t budget = 8;
    std::size_t capacity = 64;
    std::vector<double> snr_db;
    std::vector<std::string> bias_paths;
    bool bias_auto = false;
    std::size_t min_errors = 100;
    std::size_t max_frames = 1000000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::string out;
    std::string config_path;
};

void run_simulate(const SimulateArgs& a) {
    ConfigEcho echo("simulate");
    if (!a.config_path.empty()) echo.add("config", a.config_path);
    echo.add("spec", a.spec_path);
    echo.add("decoder", a.decoder);
    if (a.decoder == "scl") echo.add("list", a.list_size);
    if (a.decoder == "seq") {
        echo.add("budget", a.budget);
        echo.add("capacity", a.capacity);
        if (a.bias_auto) {
            echo.add("bias", "auto");
        } else {
            for (const std::string& p : a.bias_paths) echo.add("bias", p);
        }
    }
    std::string snrs;
    for (double s : a.snr_db) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%s%.17g", snrs.empty() ? "" : ",", s);
        snrs += buf;
    }
    echo.add("snr", snrs);
    echo.add("min-errors", a.min_errors);
    echo.add("max-frames", a.max_frames);
    echo.add("seed", a.seed);
    echo.add("workers", a.workers);
    if (!a.out.empty()) echo.add("out", a.out);
    echo.print();

    const CodeSpec spec = CodeSpec::load(a.spec_path);
    Campaign c;
    c.spec = &spec;
    c.snr_db = a.snr_db;
    c.list_size = a.list_size;
    c.visit_budget = a.budget;
    c.queue_capacity = a.capacity;
    c.min_frame_errors = a.min_errors;
    c.max_frames = a.max_frames;
    c.master_seed = a.seed;
    c.workers = a.workers;
    if (a.decoder == "sc") {
        c.decoder = DecoderKind::sc;
    } else if (a.decoder == "scl") {
        c.decoder = DecoderKind::scl;
    } else {
        c.decoder = DecoderKind::seq;
        const double rate =
            static_cast<double>(spec.k()) / static_cast<double>(spec.n());
        if (a.bias_auto) {
            for (double snr : a.snr_db)
                c.bias.push_back(bias_de(spec.m(), eb_n0_to_sigma(snr, rate)));
        } else if (a.bias_paths.size() != a.snr_db.size()) {
            throw std::invalid_argument(
                "seq simulation requires a score bias table per SNR point: pass --bias "
                "once per SNR (in order) or --bias-auto to compute them");
        } else {
            for (const std::string& p : a.bias_paths) c.bias.push_back(BiasTable::load(p));
        }
    }

    const std::string csv = emit_csv(run_campaign(c));
    std::fputs(csv.c_str(), stdout);
    if (!a.out.empty()) {
        std::ofstream file(a.out);
        if (!file) throw IoError("cannot open for writing: " + a.out);
        file << csv;
        if (!file) throw IoError("write failed: " + a.out);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polar subcode construction, decoding, and simulation toolkit"};
    app.require_subcommand(1);

    ConstructArgs ca;
    CLI::App* construct = app.add_subcommand("construct", "Build and save a code specification");
    construct->add_option("kind", ca.kind, "polar | ebch | randomized")
        ->required()
        ->check(CLI::IsMember({"polar", "ebch", "randomized"}));
    auto* opt_m = construct->add_option("--m", ca.m, "log2 of the code length");
    auto* opt_k = construct->add_option("--k", ca.k, "information bits (polar)");
    auto* opt_d = construct->add_option("--d", ca.d, "design distance (ebch)");
    construct->add_option("--base", ca.base, "base spec file (randomized)");
    construct->add_option("--extra", ca.extra, "extra dynamic checks (randomized)");
    construct->add_option("--snr-db", ca.snr_db, "design Eb/N0 for reliability estimation");
    construct->add_option("--frames", ca.frames, "reliability estimation frames");
    construct->add_option("--seed", ca.seed, "construction seed");
    construct->add_option("--out", ca.out, "output spec file")->required();

    BiasArgs ba;
    CLI::App* bias = app.add_subcommand("bias", "Compute and save a score bias table");
    bias->add_option("--method", ba.method, "de | mc")
        ->required()
        ->check(CLI::IsMember({"de", "mc"}));
    bias->add_option("--m", ba.m, "log2 of the code length")->required();
    bias->add_option("--sigma", ba.sigma, "channel noise level")->required();
    bias->add_option("--frames", ba.frames, "genie frames (mc)");
    bias->add_option("--seed", ba.seed, "genie seed (mc)");
    bias->add_option("--half-width", ba.half_width, "grid half width (de)");
    bias->add_option("--step", ba.step, "grid resolution (de)");
    bias->add_option("--tail-tol", ba.tail_tol, "allowed off-grid mass (de)");
    bias->add_option("--out", ba.out, "output table file")->required();
    bias->add_option("--compare", ba.compare, "print max abs difference to this table");

    EncodeArgs ea;
    CLI::App* encode = app.add_subcommand("encode", "Encode an information word");
    encode->add_option("--spec", ea.spec_path, "code spec file")->required();
    encode->add_option("--info", ea.info, "information bits, e.g. 1011")->required();

    DecodeArgs da;
    CLI::App* decode = app.add_subcommand("decode", "Decode one frame of channel LLRs");
    decode->add_option("--spec", da.spec_path, "code spec file")->required();
    decode->add_option("--llrs", da.llrs, "comma-separated channel LLRs")->required();
    decode->add_option("--decoder", da.decoder, "sc | scl | seq")
        ->check(CLI::IsMember({"sc", "scl", "seq"}));
    decode->add_option("--list", da.list_size, "list size (scl)");
    decode->add_option("--budget", da.budget, "per-phase visit budget (seq)");
    decode->add_option("--capacity", da.capacity, "queue capacity (seq)");
    decode->add_option("--bias", da.bias_path, "score bias table file (seq)");

    SimulateArgs sa;
    CLI::App* simulate = app.add_subcommand("simulate", "Run a Monte-Carlo campaign");
    std::string config_help_only;  // expanded before parsing; registered for --help
    simulate->add_option("--config", config_help_only,
                         "key=value file mirroring these options");
    simulate->add_option("--spec", sa.spec_path, "code spec file")->required();
    simulate->add_option("--decoder", sa.decoder, "sc | scl | seq")
        ->check(CLI::IsMember({"sc", "scl", "seq"}));
    simulate->add_option("--list", sa.list_size, "list size (scl)");
    simulate->add_option("--budget", sa.budget, "per-phase visit budget (seq)");
    simulate->add_option("--capacity", sa.capacity, "queue capacity (seq)");
    simulate->add_option("--snr", sa.snr_db, "Eb/N0 points in dB")
        ->required()
        ->delimiter(',');
    simulate->add_option("--bias", sa.bias_paths, "score bias table per SNR (seq)");
    simulate->add_flag("--bias-auto", sa.bias_auto,
                       "compute density-evolution bias tables on the fly (seq)");
    simulate->add_option("--min-errors", sa.min_errors, "stop after this many frame errors");
    simulate->add_option("--max-frames", sa.max_frames, "stop after this many frames");
    simulate->add_option("--seed", sa.seed, "master seed");
    simulate->add_option("--workers", sa.workers, "worker threads");
    simulate->add_option("--out", sa.out, "also write the CSV here");

    std::vector<std::string> args = map_bare_assignments(argc, argv);
    try {
        sa.config_path = expand_config_file(args);
        std::vector<char*> ptrs;
        ptrs.reserve(args.size());
        for (std::string& s : args) ptrs.push_back(s.data());
        app.parse(static_cast<int>(ptrs.size()), ptrs.data());
        ca.have_m = opt_m->count() > 0;
        ca.have_k = opt_k->count() > 0;
        ca.have_d = opt_d->count() > 0;
        if (construct->parsed()) run_construct(ca);
        if (bias->parsed()) run_bias(ba);
        if (encode->parsed()) run_encode(ea);
        if (decode->parsed()) run_decode(da);
        if (simulate->parsed()) run_simulate(sa);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    }
    return 0;
}
