#include <ewh_cli/cli.hpp>

#include <ewh/hgraph.hpp>
#include <ewh/ksum.hpp>
#include <ewh/ksum_reductions.hpp>
#include <ewh/pattern.hpp>
#include <ewh/reductions.hpp>
#include <ewh/solvers.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace ewh::cli {

namespace {

    // Bad arguments or malformed input; mapped to exit_usage.
    class UsageError : public std::runtime_error {
    public:
        using std::runtime_error::runtime_error;
    };

    std::string join(const std::vector<std::size_t> &xs)
    {
        std::string s;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i)
                s += ' ';
            s += std::to_string(xs[i]);
        }
        return s;
    }

    std::string join_nodes(const std::vector<int> &xs)
    {
        std::string s;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i)
                s += ',';
            s += std::to_string(xs[i]);
        }
        return s;
    }

    std::string separator_text(const SeparatorD &sep)
    {
        std::string s = join_nodes(sep.s);
        for (const auto &part : sep.parts)
            s += "|" + join_nodes(part);
        return s;
    }

    std::size_t parse_size(const std::string &text, const char *what)
    {
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(text, &pos);
        } catch (const std::exception &) {
            pos = 0;
        }
        if (pos != text.size() || text.empty() || text[0] == '-')
            throw UsageError(std::string("expected a non-negative integer for ") + what + ", got '" + text + "'");
        return static_cast<std::size_t>(v);
    }

    // "S|H1|H2..." with comma-separated node ids; any group may be empty.
    SeparatorD parse_separator(const std::string &text)
    {
        SeparatorD sep;
        std::vector<std::vector<int>> groups(1);
        std::string cur;
        auto flush = [&] {
            if (! cur.empty())
                groups.back().push_back(static_cast<int>(parse_size(cur, "separator node")));
            cur.clear();
        };
        for (char c : text) {
            if (c == '|') {
                flush();
                groups.emplace_back();
            } else if (c == ',') {
                flush();
            } else if (c != ' ') {
                cur += c;
            }
        }
        flush();
        if (groups.size() < 3)
            throw UsageError("separator needs at least two parts: 'S|H1|H2'");
        sep.s = groups.front();
        sep.parts.assign(groups.begin() + 1, groups.end());
        return sep;
    }

    std::string slurp(const std::string &path)
    {
        std::ifstream in(path);
        if (! in)
            throw UsageError("cannot open '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    std::string header_of(const std::string &text)
    {
        std::istringstream in(text);
        std::string h;
        in >> h;
        return h;
    }

    template <class F>
    auto parse_text(const std::string &text, F reader)
    {
        std::istringstream in(text);
        return reader(in);
    }

    void write_file(const std::string &path, const std::string &content)
    {
        auto parent = std::filesystem::path(path).parent_path();
        if (! parent.empty())
            std::filesystem::create_directories(parent);
        std::ofstream out(path);
        if (! out)
            throw UsageError("cannot write '" + path + "'");
        out << content;
    }

    template <class W, class T>
    std::string render(W writer, const T &value)
    {
        std::ostringstream ss;
        writer(ss, value);
        return ss.str();
    }

    bool is_number(const std::string &s)
    {
        return ! s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
    }

    // A pattern is a catalog name ("path_4", "triangle"), a family followed by
    // a size ("path 4") or a pattern file. Consumes the used arguments.
    PatternGraph take_pattern(const std::vector<std::string> &args, std::size_t &pos)
    {
        if (pos >= args.size())
            throw UsageError("missing pattern");
        const auto &a = args[pos];
        if (parse_family(a) && pos + 1 < args.size() && is_number(args[pos + 1])) {
            auto p = make_catalog_pattern(*parse_family(a), static_cast<int>(parse_size(args[pos + 1], "pattern size")));
            pos += 2;
            return p;
        }
        ++pos;
        if (std::filesystem::is_regular_file(a))
            return parse_text(slurp(a), read_pattern);
        try {
            return parse_pattern_name(a);
        } catch (const std::invalid_argument &e) {
            throw UsageError(e.what());
        }
    }

    PatternGraph pattern_arg(const std::string &text)
    {
        std::vector<std::string> one{text};
        std::size_t pos = 0;
        return take_pattern(one, pos);
    }

    struct Arity {
        std::vector<std::string> args;
        std::size_t pos = 0;

        std::size_t size(const char *what)
        {
            if (pos >= args.size())
                throw UsageError(std::string("missing argument: ") + what);
            return parse_size(args[pos++], what);
        }
        void done() const
        {
            if (pos != args.size())
                throw UsageError("unexpected argument '" + args[pos] + "'");
        }
    };

    // ---------------------------------------------------------------- gen

    struct GenOptions {
        std::string kind;
        std::vector<std::string> args;
        std::uint64_t seed = 1;
        bool plant = false;
        std::string out;
        double density = 0.5;
        std::int64_t target = 0;
    };

    int cmd_gen(const GenOptions &o, std::ostream &out)
    {
        Arity a{o.args};
        std::string text;
        std::string planted;
        if (o.kind == "ksum") {
            int k = static_cast<int>(a.size("k"));
            std::size_t n = a.size("n");
            auto bound = static_cast<std::int64_t>(a.size("weight bound"));
            a.done();
            auto inst = random_ksum(k, n, bound, o.seed);
            inst.target = o.target;
            if (o.plant)
                planted = join(plant_ksum(inst, derive_seed(o.seed, 1)).indices);
            text = render(write_ksum, inst);
        } else if (o.kind == "conv") {
            int k = static_cast<int>(a.size("k"));
            std::size_t n = a.size("n");
            auto bound = static_cast<std::int64_t>(a.size("weight bound"));
            a.done();
            auto inst = random_convksum(k, n, bound, o.seed);
            inst.target = o.target;
            if (o.plant)
                planted = join(plant_convksum(inst, derive_seed(o.seed, 1)).indices);
            text = render(write_convksum, inst);
        } else if (o.kind == "ksumseq") {
            int k = static_cast<int>(a.size("k"));
            std::size_t n = a.size("n");
            auto bound = static_cast<std::int64_t>(a.size("weight bound"));
            std::size_t count = a.size("sequence length");
            a.done();
            if (count == 0)
                throw UsageError("sequence length must be positive");
            KSumSequence seq;
            for (std::size_t i = 0; i < count; ++i) {
                seq.instances.push_back(random_ksum(k, n, bound, derive_seed(o.seed, 100 + i)));
                seq.instances.back().target = o.target;
            }
            if (o.plant) {
                Rng rng(derive_seed(o.seed, 2));
                auto at = static_cast<std::size_t>(uniform_below(rng, count));
                planted = std::to_string(at) + " " + join(plant_ksum(seq.instances[at], derive_seed(o.seed, 1)).indices);
            }
            text = render(write_ksum_sequence, seq);
        } else if (o.kind == "ewh") {
            auto pattern = take_pattern(a.args, a.pos);
            std::size_t n = a.size("n");
            auto bound = static_cast<std::int64_t>(a.size("weight bound"));
            a.done();
            auto inst = random_instance(pattern, n, bound, o.seed, o.target);
            if (o.plant) {
                auto p = plant_solution(inst, derive_seed(o.seed, 1));
                inst = std::move(p.instance);
                planted = join(p.solution.assignment);
            }
            text = render(write_hpartite, inst);
        } else if (o.kind == "ewg") {
            auto pattern = take_pattern(a.args, a.pos);
            std::size_t nv = a.size("vertex count");
            auto bound = static_cast<std::int64_t>(a.size("weight bound"));
            a.done();
            auto g = random_general(pattern, nv, o.density, bound, o.seed, o.target);
            if (o.plant)
                planted = join(plant_general(g, derive_seed(o.seed, 1)));
            text = render(write_general, g);
        } else if (o.kind == "pattern") {
            auto pattern = take_pattern(a.args, a.pos);
            a.done();
            text = render(write_pattern, pattern);
        } else {
            throw UsageError("unknown instance kind '" + o.kind + "' (ksum, conv, ksumseq, ewh, ewg, pattern)");
        }

        if (o.out.empty()) {
            out << text;
        } else {
            write_file(o.out, text);
            out << "file " << o.out << '\n';
            if (o.plant)
                out << "planted " << planted << '\n';
        }
        return exit_yes;
    }

    // -------------------------------------------------------------- solve

    struct SolveOptions {
        std::string file;
        std::string algo;
        std::string separator;
        int d = 2;
        int jobs = 1;
        std::uint64_t seed = 1;
        int repetitions = 3;
        int bucket_bits = 0;
        bool stats = false;
        bool verify = false;
    };

    void print_stats(std::ostream &out, const SolveStats &s)
    {
        out << "tuples_enumerated " << s.tuples_enumerated << '\n';
        out << "list_entries_built " << s.list_entries_built << '\n';
        out << "ksum_instances_emitted " << s.ksum_instances_emitted << '\n';
        out << "oracle_comparisons " << s.oracle_comparisons << '\n';
    }

    struct Verdict {
        bool yes = false;
        std::string witness;
        SolveStats stats;
        std::vector<std::pair<std::string, std::string>> extra;
        // Independent check of the witness (re-summation) and oracle verdict.
        std::optional<bool> witness_ok;
        std::optional<bool> oracle_yes;
        // Set when the solver already printed its own result lines.
        bool reported = false;
    };

    Verdict solve_ksum_file(const SolveOptions &o, const std::string &text)
    {
        auto inst = parse_text(text, read_ksum);
        validate_ksum(inst);
        std::string algo = o.algo.empty() ? "mitm" : o.algo;
        Verdict v;
        std::optional<KSolution> sol;
        if (algo == "brute" || algo == "mitm") {
            auto r = solve_ksum(inst, algo == "brute" ? KSumSolver::bruteforce : KSumSolver::mitm);
            sol = r.solution;
            v.stats = r.stats;
        } else if (algo == "hash-seq") {
            KSumToSequence red(inst, o.seed, o.repetitions);
            auto r = red.solve(KSumSolver::mitm);
            sol = r.solution;
            v.stats = r.stats;
            v.extra.emplace_back("rounds", std::to_string(red.rounds()));
            v.extra.emplace_back("buckets", std::to_string(red.buckets()));
        } else if (algo == "hash-conv") {
            int bits = o.bucket_bits;
            if (bits <= 0) {
                bits = 1;
                while ((std::size_t{1} << bits) < inst.max_list_size())
                    ++bits;
                bits = std::max(1, bits / 2);
            }
            KSumToConv red(inst, bits, o.seed, o.repetitions);
            red.for_each([&](const KSumToConv::Emission &e) {
                ++v.stats.ksum_instances_emitted;
                auto r = solve_convksum_bruteforce(e.instance);
                v.stats.tuples_enumerated += r.stats.tuples_enumerated;
                if (r.solution) {
                    sol = red.map_back(e, *r.solution);
                    return false;
                }
                return true;
            });
            v.extra.emplace_back("rounds", std::to_string(red.rounds()));
        } else {
            throw UsageError("unknown k-SUM algorithm '" + algo + "' (brute, mitm, hash-seq, hash-conv)");
        }
        v.extra.insert(v.extra.begin(), {"algorithm", algo});
        if (sol) {
            v.yes = true;
            v.witness = join(sol->indices);
        }
        if (o.verify) {
            if (sol)
                v.witness_ok = is_solution(inst, *sol);
            v.oracle_yes = solve_ksum_mitm(inst).solution.has_value();
        }
        return v;
    }

    Verdict solve_conv_file(const SolveOptions &o, const std::string &text)
    {
        auto inst = parse_text(text, read_convksum);
        if (! o.algo.empty() && o.algo != "brute")
            throw UsageError("convolution instances only support the brute algorithm");
        Verdict v;
        auto r = solve_convksum_bruteforce(inst);
        v.stats = r.stats;
        v.extra.emplace_back("algorithm", "brute");
        if (r.solution) {
            v.yes = true;
            v.witness = join(r.solution->indices);
            if (o.verify)
                v.witness_ok = is_solution(inst, *r.solution);
        }
        return v;
    }

    Verdict solve_seq_file(const SolveOptions &o, const std::string &text)
    {
        auto seq = parse_text(text, read_ksum_sequence);
        std::string algo = o.algo.empty() ? "mitm" : o.algo;
        if (algo != "brute" && algo != "mitm")
            throw UsageError("sequence instances support brute and mitm");
        Verdict v;
        auto r = solve_sequence(seq, algo == "brute" ? KSumSolver::bruteforce : KSumSolver::mitm);
        v.stats = r.stats;
        v.extra.emplace_back("algorithm", algo);
        if (r.hit) {
            v.yes = true;
            v.witness = join(r.hit->solution.indices);
            v.extra.emplace_back("instance", std::to_string(r.hit->instance_index));
            if (o.verify)
                v.witness_ok = is_solution(seq.instances[r.hit->instance_index], r.hit->solution);
        }
        return v;
    }

    Verdict solve_ewh_file(const SolveOptions &o, const std::string &text, std::ostream &out)
    {
        auto inst = parse_text(text, read_hpartite);
        std::string algo = o.algo.empty() ? "separator" : o.algo;
        Verdict v;
        std::optional<HSubgraph> sol;
        if (algo == "brute") {
            auto r = brute_force_ew(inst);
            sol = r.solution;
            v.stats = r.stats;
        } else if (algo == "separator") {
            std::optional<Separator2> sep;
            if (! o.separator.empty()) {
                auto d = parse_separator(o.separator);
                if (d.d() != 2)
                    throw UsageError("the separator algorithm takes exactly two parts");
                sep = Separator2{d.s, d.parts[0], d.parts[1]};
                if (! is_valid_separator(inst.pattern(), *sep))
                    throw UsageError("'" + o.separator + "' is not a separator of the pattern");
            }
            auto used = sep ? as_d_separator(*sep) : as_d_separator(gamma(inst.pattern()).argmin);
            auto r = separator_solve(inst, sep, o.jobs);
            sol = r.solution;
            v.stats = r.stats;
            v.extra.emplace_back("separator", separator_text(used));
        } else if (algo == "dsep") {
            auto sep = o.separator.empty() ? best_d_separator(inst.pattern(), o.d) : parse_separator(o.separator);
            if (! is_valid_separator(inst.pattern(), sep))
                throw UsageError("'" + o.separator + "' is not a separator of the pattern");
            auto r = dsep_solve(inst, sep, KSumSolver::mitm, o.jobs);
            sol = r.solution;
            v.stats = r.stats;
            v.extra.emplace_back("separator", separator_text(sep));
        } else if (algo == "min-weight") {
            auto sep = o.separator.empty() ? independent_set_separator(inst.pattern()) : parse_separator(o.separator);
            auto r = min_weight_solve(inst, sep);
            out << "algorithm min-weight\n";
            out << "separator " << separator_text(sep) << '\n';
            out << "min_weight " << to_string(r.value) << '\n';
            out << "witness " << join(r.argmin.assignment) << '\n';
            v.stats = r.stats;
            v.yes = true;
            v.extra.clear();
            if (o.verify) {
                auto oracle = brute_force_min_weight(inst);
                v.witness_ok = weight_of(inst, r.argmin) == r.value && oracle.value == r.value;
            }
            v.reported = true;
            return v;
        } else {
            throw UsageError("unknown EW(H) algorithm '" + algo + "' (brute, separator, dsep, min-weight)");
        }
        v.extra.insert(v.extra.begin(), {"algorithm", algo});
        if (sol) {
            v.yes = true;
            v.witness = join(sol->assignment);
        }
        if (o.verify) {
            if (sol)
                v.witness_ok = weight_of(inst, *sol) == inst.target();
            v.oracle_yes = brute_force_ew(inst).solution.has_value();
        }
        return v;
    }

    Verdict solve_ewg_file(const SolveOptions &o, const std::string &text)
    {
        auto g = parse_text(text, read_general);
        validate_general(g);
        std::string algo = o.algo.empty() ? "brute" : o.algo;
        Verdict v;
        std::optional<std::vector<std::size_t>> map;
        if (algo == "brute") {
            auto r = brute_force_general(g);
            map = r.map;
            v.stats = r.stats;
        } else if (algo == "colorcode") {
            GeneralToHPartite red(g, o.seed, o.repetitions);
            auto r = red.solve();
            map = r.map;
            v.stats = r.stats;
            v.extra.emplace_back("rounds", std::to_string(red.rounds()));
        } else if (algo == "edges") {
            EwToKSumEdges red(g, o.seed, o.repetitions);
            auto r = red.solve(KSumSolver::mitm);
            map = r.map;
            v.stats = r.stats;
            v.extra.emplace_back("rounds", std::to_string(red.rounds()));
            v.extra.emplace_back("longest_list", std::to_string(r.longest_list));
        } else {
            throw UsageError("unknown general-graph algorithm '" + algo + "' (brute, colorcode, edges)");
        }
        v.extra.insert(v.extra.begin(), {"algorithm", algo});
        if (map) {
            v.yes = true;
            v.witness = join(*map);
        }
        if (o.verify) {
            if (map) {
                auto w = mapped_weight(g, *map);
                v.witness_ok = w && *w == g.target;
            }
            v.oracle_yes = brute_force_general(g).map.has_value();
        }
        return v;
    }

    int cmd_solve(const SolveOptions &o, std::ostream &out)
    {
        auto text = slurp(o.file);
        auto header = header_of(text);
        Verdict v;
        if (header == "KSUM")
            v = solve_ksum_file(o, text);
        else if (header == "CONVKSUM")
            v = solve_conv_file(o, text);
        else if (header == "KSUMSEQ")
            v = solve_seq_file(o, text);
        else if (header == "EWH")
            v = solve_ewh_file(o, text, out);
        else if (header == "EWG")
            v = solve_ewg_file(o, text);
        else
            throw UsageError("unrecognised instance header '" + header + "'");

        if (! v.reported) {
            for (const auto &[key, value] : v.extra)
                out << key << ' ' << value << '\n';
            out << "verdict " << (v.yes ? "YES" : "NO") << '\n';
            out << "witness" << (v.yes ? " " + v.witness : std::string()) << '\n';
        }
        if (o.stats)
            print_stats(out, v.stats);
        bool ok = true;
        if (o.verify) {
            if (v.witness_ok) {
                out << "witness_check " << (*v.witness_ok ? "ok" : "FAILED") << '\n';
                ok = ok && *v.witness_ok;
            }
            if (v.oracle_yes) {
                bool agree = *v.oracle_yes == v.yes;
                out << "oracle " << (*v.oracle_yes ? "YES" : "NO") << '\n';
                out << "oracle_check " << (agree ? "ok" : "MISMATCH") << '\n';
                ok = ok && agree;
            }
        }
        if (! ok)
            throw std::runtime_error("verification failed");
        return v.yes ? exit_yes : exit_no;
    }

    // ------------------------------------------------------------- reduce

    struct ReduceOptions {
        std::string id;
        std::string in;
        std::string prefix;
        std::uint64_t seed = 1;
        int repetitions = 3;
        bool verify = false;
        std::string pattern;
        std::string hprime;
        std::vector<int> edge;
        std::vector<int> split;
        int apex = -1;
        int budget = 6;
    };

    struct ReduceOutput {
        std::vector<std::pair<std::string, std::string>> files;
        std::vector<std::string> sidecar;
        std::optional<bool> input_yes;
        std::optional<bool> output_yes;
        bool replay_ok = true;
    };

    std::string numbered(const std::string &prefix, const std::string &stem, std::size_t i, std::size_t count,
                         const std::string &ext)
    {
        if (count == 1)
            return prefix + stem + ext;
        return prefix + stem + "_" + std::to_string(i) + ext;
    }

    void check_hsub(ReduceOutput &r, const HPartiteInstance &in, const HPartiteInstance &outi,
                    const std::function<HSubgraph(const HSubgraph &)> &back)
    {
        r.input_yes = brute_force_ew(in).solution.has_value();
        auto res = brute_force_ew(outi);
        r.output_yes = res.solution.has_value();
        if (res.solution) {
            auto mapped = back(*res.solution);
            r.replay_ok = weight_of(in, mapped) == in.target();
        }
    }

    HPartiteInstance read_ewh_file(const std::string &path)
    {
        auto text = slurp(path);
        if (header_of(text) != "EWH")
            throw UsageError("'" + path + "' is not an EWH file");
        return parse_text(text, read_hpartite);
    }

    KSumInstance read_ksum_file(const std::string &path)
    {
        auto text = slurp(path);
        if (header_of(text) != "KSUM")
            throw UsageError("'" + path + "' is not a KSUM file");
        auto inst = parse_text(text, read_ksum);
        validate_ksum(inst);
        return inst;
    }

    int cmd_reduce(const ReduceOptions &o, std::ostream &out)
    {
        ReduceOutput r;
        const auto &id = o.id;
        auto ewh_out = [&](const HPartiteInstance &inst, std::size_t i, std::size_t count) {
            r.files.emplace_back(numbered(o.prefix, "instance", i, count, ".ewh"), render(write_hpartite, inst));
        };
        r.sidecar.push_back("reduction " + id);
        r.sidecar.push_back("input " + o.in);

        if (id == "ksum-to-any") {
            if (o.pattern.empty())
                throw UsageError("ksum-to-any needs --pattern");
            auto inst = read_ksum_file(o.in);
            KSumToAny red(inst, pattern_arg(o.pattern));
            ewh_out(red.instance(), 0, 1);
            r.sidecar.push_back("map identity");
            if (o.verify) {
                r.input_yes = solve_ksum_mitm(inst).solution.has_value();
                auto res = brute_force_ew(red.instance());
                r.output_yes = res.solution.has_value();
                if (res.solution)
                    r.replay_ok = is_solution(inst, red.map_back(*res.solution));
            }
        } else if (id == "ksum-to-matching") {
            auto inst = read_ksum_file(o.in);
            KSumToMatching red(inst);
            ewh_out(red.instance(), 0, 1);
            r.sidecar.push_back("side " + std::to_string(red.side()));
            r.sidecar.push_back("map row_major");
            if (o.verify) {
                r.input_yes = solve_ksum_mitm(inst).solution.has_value();
                auto res = brute_force_ew(red.instance());
                r.output_yes = res.solution.has_value();
                if (res.solution)
                    r.replay_ok = is_solution(inst, red.map_back(*res.solution));
            }
        } else if (id == "seq-to-star") {
            auto text = slurp(o.in);
            if (header_of(text) != "KSUMSEQ")
                throw UsageError("seq-to-star needs a KSUMSEQ file");
            auto seq = parse_text(text, read_ksum_sequence);
            SequenceToStar red(seq);
            ewh_out(red.instance(), 0, 1);
            r.sidecar.push_back("centre " + std::to_string(red.instance().k() - 1));
            r.sidecar.push_back("instances " + std::to_string(seq.instances.size()));
            if (o.verify) {
                r.input_yes = solve_sequence(seq, KSumSolver::mitm).hit.has_value();
                auto res = brute_force_ew(red.instance());
                r.output_yes = res.solution.has_value();
                if (res.solution) {
                    auto w = red.map_back(*res.solution);
                    r.replay_ok = is_solution(seq.instances.at(w.instance_index), w.solution);
                }
            }
        } else if (id == "conv-to-path") {
            auto text = slurp(o.in);
            if (header_of(text) != "CONVKSUM")
                throw UsageError("conv-to-path needs a CONVKSUM file");
            auto inst = parse_text(text, read_convksum);
            ConvToPath red(inst);
            ewh_out(red.instance(), 0, 1);
            r.sidecar.push_back("path_nodes " + std::to_string(red.instance().k()));
            r.sidecar.push_back("map prefix_difference");
            if (o.verify) {
                r.input_yes = solve_convksum_bruteforce(inst).solution.has_value();
                auto res = brute_force_ew(red.instance());
                r.output_yes = res.solution.has_value();
                if (res.solution)
                    r.replay_ok = is_solution(inst, red.map_back(*res.solution));
            }
        } else if (id == "vm-edge-del") {
            if (o.hprime.empty() || o.edge.size() != 2)
                throw UsageError("vm-edge-del needs --hprime and --edge U V");
            auto inst = read_ewh_file(o.in);
            EdgeDeleteLift red(inst, pattern_arg(o.hprime), o.edge[0], o.edge[1]);
            ewh_out(red.instance(), 0, 1);
            r.sidecar.push_back("edge " + std::to_string(o.edge[0]) + " " + std::to_string(o.edge[1]));
            r.sidecar.push_back("map identity");
            if (o.verify)
                check_hsub(r, inst, red.instance(), [&](const HSubgraph &s) { return red.map_back(s); });
        } else if (id == "vm-contract") {
            if (o.hprime.empty() || o.split.size() != 2)
                throw UsageError("vm-contract needs --hprime and --split U1 U2");
            auto inst = read_ewh_file(o.in);
            ContractLift red(inst, pattern_arg(o.hprime), o.split[0], o.split[1]);
            ewh_out(red.instance(), 0, 1);
            r.sidecar.push_back("split " + std::to_string(o.split[0]) + " " + std::to_string(o.split[1]));
            r.sidecar.push_back("multiplier " + to_string(red.multiplier()));
            if (o.verify)
                check_hsub(r, inst, red.instance(), [&](const HSubgraph &s) { return red.map_back(s); });
        } else if (id == "vm-chain") {
            if (o.hprime.empty())
                throw UsageError("vm-chain needs --hprime (the larger pattern)");
            auto inst = read_ewh_file(o.in);
            auto h2 = pattern_arg(o.hprime);
            auto ops = find_vm_sequence(inst.pattern(), h2, o.budget);
            if (! ops)
                throw UsageError("no vertex-minor sequence found within the budget");
            VmChain red(inst, h2, *ops);
            ewh_out(red.instance(), 0, 1);
            for (const auto &op : *ops)
                r.sidecar.push_back("op " + describe(op));
            if (o.verify)
                check_hsub(r, inst, red.instance(), [&](const HSubgraph &s) { return red.map_back(s); });
        } else if (id == "apex-split") {
            auto inst = read_ewh_file(o.in);
            int apex = o.apex;
            if (apex < 0) {
                for (int x = 0; x < inst.k() && apex < 0; ++x)
                    if (inst.pattern().degree(x) == inst.k() - 1)
                        apex = x;
                if (apex < 0)
                    throw UsageError("pattern has no universal node");
            }
            ApexSplit red(inst, apex);
            const auto &outs = red.instances();
            for (std::size_t i = 0; i < outs.size(); ++i)
                ewh_out(outs[i], i, outs.size());
            r.sidecar.push_back("apex " + std::to_string(apex));
            if (o.verify) {
                r.input_yes = brute_force_ew(inst).solution.has_value();
                r.output_yes = false;
                for (std::size_t i = 0; i < outs.size(); ++i) {
                    auto res = brute_force_ew(outs[i]);
                    if (res.solution) {
                        r.output_yes = true;
                        r.replay_ok = r.replay_ok && weight_of(inst, red.map_back(i, *res.solution)) == inst.target();
                    }
                }
            }
        } else if (id == "ew-to-ksum-edges") {
            auto text = slurp(o.in);
            if (header_of(text) != "EWG")
                throw UsageError("ew-to-ksum-edges needs an EWG file");
            auto g = parse_text(text, read_general);
            validate_general(g);
            EwToKSumEdges red(g, o.seed, o.repetitions);
            r.sidecar.push_back("seed " + std::to_string(o.seed));
            for (const auto &op : red.chain())
                r.sidecar.push_back("op " + describe(op));
            if (o.verify) {
                r.input_yes = brute_force_general(g).map.has_value();
                r.output_yes = false;
            }
            for (std::size_t i = 0; i < red.rounds(); ++i) {
                auto rd = red.round(i);
                if (rd.empty_list) {
                    r.sidecar.push_back("empty " + std::to_string(i));
                    continue;
                }
                r.files.emplace_back(numbered(o.prefix, "round", i, red.rounds(), ".ksum"),
                                     render(write_ksum, rd.instance));
                for (std::size_t j = 0; j < rd.origin.size(); ++j)
                    for (std::size_t e = 0; e < rd.origin[j].size(); ++e)
                        r.sidecar.push_back("origin " + std::to_string(i) + " " + std::to_string(j) + " " +
                                            std::to_string(e) + " " + std::to_string(rd.origin[j][e].first) + " " +
                                            std::to_string(rd.origin[j][e].second));
                if (o.verify) {
                    auto res = solve_ksum_mitm(rd.instance);
                    if (res.solution) {
                        r.output_yes = true;
                        auto map = red.map_back(rd, *res.solution);
                        auto w = mapped_weight(g, map);
                        r.replay_ok = r.replay_ok && w && *w == g.target;
                    }
                }
            }
        } else {
            std::string ids;
            for (auto x : kReductionIds)
                ids += (ids.empty() ? "" : ", ") + std::string(x);
            throw UsageError("unknown reduction '" + id + "' (" + ids + ")");
        }

        r.sidecar.insert(r.sidecar.begin() + 2, "outputs " + std::to_string(r.files.size()));
        for (const auto &[path, content] : r.files)
            write_file(path, content);
        std::string sidecar_path = o.prefix + "witness.map";
        std::string sc;
        for (const auto &line : r.sidecar)
            sc += line + '\n';
        write_file(sidecar_path, sc);

        out << "reduction " << id << '\n';
        out << "outputs " << r.files.size() << '\n';
        for (const auto &f : r.files)
            out << "file " << f.first << '\n';
        out << "sidecar " << sidecar_path << '\n';
        if (o.verify) {
            bool agree = *r.input_yes == *r.output_yes;
            out << "input_verdict " << (*r.input_yes ? "YES" : "NO") << '\n';
            out << "output_verdict " << (*r.output_yes ? "YES" : "NO") << '\n';
            out << "replay " << (r.replay_ok ? "ok" : "FAILED") << '\n';
            out << "verify " << (agree && r.replay_ok ? "ok" : "MISMATCH") << '\n';
            if (! agree || ! r.replay_ok)
                return exit_no;
        }
        return exit_yes;
    }

    // -------------------------------------------------------------- bench

    struct BenchOptions {
        std::vector<std::string> patterns;
        std::string family;
        std::string k_range;
        std::vector<std::size_t> ns{4, 8, 16, 32};
        std::vector<std::string> algos{"separator"};
        int seeds = 1;
        std::uint64_t seed = 1;
        int jobs = 1;
        int d = 2;
    };

    std::pair<int, int> parse_range(const std::string &text)
    {
        auto dots = text.find("..");
        if (dots == std::string::npos) {
            int v = static_cast<int>(parse_size(text, "k"));
            return {v, v};
        }
        return {static_cast<int>(parse_size(text.substr(0, dots), "k")),
                static_cast<int>(parse_size(text.substr(dots + 2), "k"))};
    }

    int cmd_bench(const BenchOptions &o, std::ostream &out)
    {
        std::vector<std::pair<std::string, PatternGraph>> patterns;
        for (const auto &name : o.patterns)
            patterns.emplace_back(name, pattern_arg(name));
        if (! o.family.empty()) {
            auto fam = parse_family(o.family);
            if (! fam)
                throw UsageError("unknown family '" + o.family + "'");
            auto [lo, hi] = parse_range(o.k_range.empty() ? "3" : o.k_range);
            for (int k = lo; k <= hi; ++k)
                patterns.emplace_back(o.family + "_" + std::to_string(k), make_catalog_pattern(*fam, k));
        }
        if (patterns.empty())
            throw UsageError("bench needs --pattern or --family");
        if (o.ns.size() < 2)
            throw UsageError("bench needs at least two values of n");
        for (const auto &a : o.algos)
            if (a != "separator" && a != "dsep" && a != "brute" && a != "min-weight")
                throw UsageError("unknown bench algorithm '" + a + "'");

        out << "pattern n algorithm work tuples_enumerated list_entries_built ksum_instances_emitted seconds\n";
        std::vector<std::string> slopes;
        for (const auto &[name, p] : patterns) {
            const int g = gamma(p).value;
            for (const auto &algo : o.algos) {
                std::vector<double> work;
                for (auto n : o.ns) {
                    SolveStats total;
                    double seconds = 0;
                    for (int s = 0; s < o.seeds; ++s) {
                        // Unreachable target: every solver runs to completion.
                        Weight target = Weight(p.size() + p.edge_count()) * 20 + 1;
                        auto inst = random_instance(p, n, 20, derive_seed(o.seed, static_cast<std::uint64_t>(s)), target);
                        auto t0 = std::chrono::steady_clock::now();
                        SolveStats st;
                        if (algo == "separator")
                            st = separator_solve(inst, std::nullopt, o.jobs).stats;
                        else if (algo == "dsep")
                            st = dsep_solve(inst, best_d_separator(p, o.d), KSumSolver::mitm, o.jobs).stats;
                        else if (algo == "min-weight")
                            st = min_weight_solve(inst).stats;
                        else
                            st = brute_force_ew(inst).stats;
                        seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                        total += st;
                    }
                    std::uint64_t w = (algo == "brute" ? total.tuples_enumerated : total.list_entries_built) /
                                      static_cast<std::uint64_t>(o.seeds);
                    work.push_back(static_cast<double>(w));
                    out << name << ' ' << n << ' ' << algo << ' ' << w << ' ' << total.tuples_enumerated << ' '
                        << total.list_entries_built << ' ' << total.ksum_instances_emitted << ' ' << std::fixed
                        << std::setprecision(6) << seconds / o.seeds << '\n';
                }
                std::size_t last = o.ns.size() - 1;
                double slope = std::log(work[last] / work[last - 1]) /
                               std::log(static_cast<double>(o.ns[last]) / static_cast<double>(o.ns[last - 1]));
                std::ostringstream line;
                line << "slope " << name << ' ' << algo << ' ' << std::fixed << std::setprecision(3) << slope
                     << " gamma " << g;
                slopes.push_back(line.str());
            }
        }
        for (const auto &s : slopes)
            out << s << '\n';
        return exit_yes;
    }

    // -------------------------------------------------------- gamma, vm-find

    int cmd_gamma(const std::string &pattern_text, bool all, std::ostream &out)
    {
        auto p = pattern_arg(pattern_text);
        auto g = gamma(p);
        auto mis = independence_number(p);
        out << "nodes " << p.size() << '\n';
        out << "edges " << p.edge_count() << '\n';
        out << "gamma " << g.value << '\n';
        out << "separator " << separator_text(as_d_separator(g.argmin)) << '\n';
        out << "independence_number " << mis.size << '\n';
        if (all)
            for (const auto &sep : enumerate_2separators(p))
                out << "candidate " << separator_text(as_d_separator(sep)) << " cost " << separator_cost(sep) << '\n';
        return exit_yes;
    }

    int cmd_vm_find(const std::string &h1_text, const std::string &h2_text, int budget, std::ostream &out)
    {
        auto h1 = pattern_arg(h1_text);
        auto h2 = pattern_arg(h2_text);
        auto ops = find_vm_sequence(h1, h2, budget);
        out << "found " << (ops ? "true" : "false") << '\n';
        if (! ops)
            return exit_no;
        out << "ops " << ops->size() << '\n';
        for (const auto &op : *ops)
            out << "op " << describe(op) << '\n';
        return exit_yes;
    }

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Exact-Weight-H and k-SUM reductions, solvers and oracles", "ewh"};
    app.require_subcommand(1);

    GenOptions gen;
    auto *g = app.add_subcommand("gen", "Generate an instance");
    g->add_option("kind", gen.kind, "ksum | conv | ksumseq | ewh | ewg | pattern")->required();
    g->add_option("args", gen.args, "Kind-specific sizes")->required();
    g->add_option("--seed", gen.seed);
    g->add_flag("--plant", gen.plant, "Guarantee a yes-instance");
    g->add_option("-o,--out", gen.out, "Output file (stdout when omitted)");
    g->add_option("--density", gen.density, "Edge probability for ewg")->check(CLI::Range(0.0, 1.0));
    g->add_option("--target", gen.target);

    ReduceOptions red;
    auto *r = app.add_subcommand("reduce", "Apply a reduction and write its outputs plus a witness sidecar");
    r->add_option("reduction", red.id)->required();
    r->add_option("input", red.in)->required();
    r->add_option("out-prefix", red.prefix)->required();
    r->add_option("--seed", red.seed);
    r->add_option("--repetitions", red.repetitions)->check(CLI::PositiveNumber);
    r->add_flag("--verify", red.verify, "Check yes/no agreement and witness replay with the oracles");
    r->add_option("--pattern", red.pattern, "Target pattern for ksum-to-any");
    r->add_option("--hprime", red.hprime, "Larger pattern for vm-edge-del, vm-contract, vm-chain");
    r->add_option("--edge", red.edge, "Deleted edge U V")->expected(2);
    r->add_option("--split", red.split, "Split nodes U1 U2")->expected(2);
    r->add_option("--apex", red.apex);
    r->add_option("--budget", red.budget, "Operation budget for vm-chain search");
    int reduce_jobs = 1;
    r->add_option("--jobs", reduce_jobs);

    SolveOptions sol;
    auto *s = app.add_subcommand("solve", "Solve an instance file");
    s->add_option("input", sol.file)->required();
    s->add_option("--algo", sol.algo);
    s->add_option("--separator", sol.separator, "S|H1|H2[|...] with comma-separated nodes");
    s->add_option("--d", sol.d, "Number of parts for dsep")->check(CLI::Range(2, kMaxPatternNodes));
    s->add_option("--jobs", sol.jobs)->check(CLI::PositiveNumber);
    s->add_option("--seed", sol.seed);
    s->add_option("--repetitions", sol.repetitions)->check(CLI::PositiveNumber);
    s->add_option("--bucket-bits", sol.bucket_bits);
    s->add_flag("--stats", sol.stats);
    s->add_flag("--verify", sol.verify);

    BenchOptions bench;
    auto *b = app.add_subcommand("bench", "Work-count scaling table");
    b->add_option("--pattern", bench.patterns)->delimiter(',');
    b->add_option("--family", bench.family);
    b->add_option("--k", bench.k_range, "Size range for --family, e.g. 3..5");
    b->add_option("--n", bench.ns)->delimiter(',');
    b->add_option("--algo", bench.algos)->delimiter(',');
    b->add_option("--seeds", bench.seeds)->check(CLI::PositiveNumber);
    b->add_option("--seed", bench.seed);
    b->add_option("--jobs", bench.jobs)->check(CLI::PositiveNumber);
    b->add_option("--d", bench.d)->check(CLI::Range(2, kMaxPatternNodes));

    std::string gamma_pattern;
    bool gamma_all = false;
    auto *gm = app.add_subcommand("gamma", "Separator exponent of a pattern");
    gm->add_option("pattern", gamma_pattern)->required();
    gm->add_flag("--all", gamma_all, "List every 2-separator");

    std::string vm_h1, vm_h2;
    int vm_budget = 6;
    auto *vm = app.add_subcommand("vm-find", "Search for a vertex-minor operation sequence from H2 to H1");
    vm->add_option("h1", vm_h1)->required();
    vm->add_option("h2", vm_h2)->required();
    vm->add_option("--budget", vm_budget);

    std::vector<const char *> argv{"ewh"};
    for (const auto &a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : exit_usage;
    }

    try {
        if (*g)
            return cmd_gen(gen, out);
        if (*r)
            return cmd_reduce(red, out);
        if (*s)
            return cmd_solve(sol, out);
        if (*b)
            return cmd_bench(bench, out);
        if (*gm)
            return cmd_gamma(gamma_pattern, gamma_all, out);
        if (*vm)
            return cmd_vm_find(vm_h1, vm_h2, vm_budget, out);
    } catch (const GuardExceeded &e) {
        err << "guard exceeded: " << e.what() << '\n';
        return exit_guard;
    } catch (const UsageError &e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}

} // namespace ewh::cli
