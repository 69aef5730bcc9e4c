// optl: command-line front end.
//
// exit codes: 0 ok / holds-at-bound / accepted, 1 counterexample / rejected,
// 2 bad input, 3 internal disagreement between automaton and evaluator

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "optl/optl.hpp"

using namespace optl;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(0, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw InputError(0, "cannot write '" + path + "'");
    out << text;
}

template <class F>
auto with_file(const std::string& path, F&& parse) {
    try {
        return parse(slurp(path));
    } catch (const InputError& e) {
        throw InputError(0, path + ": " + e.what());
    }
}

OpMatrix load_opm(const std::string& path) { return with_file(path, parse_opm); }
OpWord load_word(const std::string& path) { return with_file(path, parse_word); }
Opa load_opa(const std::string& path, const OpMatrix& m) {
    return with_file(path, [&](const std::string& t) { return parse_opa(t, m); });
}

LetterMode letter_mode(const std::string& s) {
    if (s == "bylabel") return LetterMode::ByLabel;
    if (s == "restricted") return LetterMode::Restricted;
    if (s == "all") return LetterMode::All;
    throw InputError(0, "unknown letter mode '" + s + "'");
}

std::string show(const Configuration& c, const Opa& a, const OpWord& x) {
    std::string out = "state " + a.state_name(c.state) + ", lookahead " + std::to_string(c.lookahead) + ", stack";
    for (const auto& e : c.stack) out += " [" + x.label(e.position).to_string() + " " + a.state_name(e.state) + "]";
    return out;
}

std::string word_text(const OpWord& x) { return x.length() ? x.to_string() : "// empty word"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Operator precedence temporal logic toolkit"};
    app.require_subcommand(1);

    std::string opm, word, formula, system, letters = "bylabel", out_word, out_opm;
    std::size_t bound = 5;
    std::optional<Position> position;
    bool stats = false;

    auto* eval_cmd = app.add_subcommand("eval", "truth of a formula at each position of a word");
    eval_cmd->add_option("--opm", opm, "OPM file")->required();
    eval_cmd->add_option("--word", word, "word file")->required();
    eval_cmd->add_option("--formula", formula, "formula")->required();
    eval_cmd->add_option("--position", position, "only this position");

    auto* chains_cmd = app.add_subcommand("chains", "chain relation of a word");
    chains_cmd->add_option("--opm", opm, "OPM file")->required();
    chains_cmd->add_option("--word", word, "word file")->required();

    auto* run_cmd = app.add_subcommand("run", "run an automaton on a word");
    run_cmd->add_option("--opm", opm, "OPM file")->required();
    run_cmd->add_option("--system", system, "automaton file")->required();
    run_cmd->add_option("--word", word, "word file")->required();

    auto* build_cmd = app.add_subcommand("build", "compile a formula into an automaton");
    build_cmd->add_option("--opm", opm, "OPM file")->required();
    build_cmd->add_option("--formula", formula, "formula")->required();
    build_cmd->add_flag("--stats", stats, "append closure and transition counts");

    auto* rewrite_cmd = app.add_subcommand("rewrite", "remove hierarchical operators");
    rewrite_cmd->add_option("--opm", opm, "OPM file")->required();
    rewrite_cmd->add_option("--formula", formula, "formula")->required();
    rewrite_cmd->add_option("--letters", letters, "bylabel, restricted or all");
    rewrite_cmd->add_flag("--stats", stats, "print sizes");

    auto* nw_cmd = app.add_subcommand("translate-nwtl", "translate a nested word and/or an NWTL formula");
    nw_cmd->add_option("--word", word, "nested word file");
    nw_cmd->add_option("--formula", formula, "NWTL formula");
    nw_cmd->add_option("--out-word", out_word, "write the OP word here");
    nw_cmd->add_option("--out-opm", out_opm, "write the OPM here");

    auto* check_cmd = app.add_subcommand("check", "bounded model checking");
    check_cmd->add_option("--opm", opm, "OPM file")->required();
    check_cmd->add_option("--formula", formula, "formula")->required();
    check_cmd->add_option("--bound", bound, "maximum word length")->check(CLI::Range(1, 64));
    check_cmd->add_option("--system", system, "automaton file (default: every compatible word)");
    check_cmd->add_flag("--stats", stats, "print sizes and timing");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*eval_cmd) {
            OpMatrix m = load_opm(opm);
            OpWord x = load_word(word);
            Formula f = parse_formula(formula);
            Model model = Model::build(x, m);
            auto truth = eval_all(model, f);
            if (position) {
                if (*position < 1 || *position > x.length()) throw InputError(0, "position out of range");
                std::cout << (truth[*position] ? "true" : "false") << "\n";
                return 0;
            }
            for (Position i = 1; i <= x.length(); ++i) {
                std::cout << i << "\t" << x.label(i).to_string() << "\t" << (truth[i] ? "true" : "false") << "\n";
            }
            return 0;
        }
        if (*chains_cmd) {
            OpMatrix m = load_opm(opm);
            OpWord x = load_word(word);
            ChainStructure c = compute_chains(x, m);
            for (auto [i, j] : c.chains()) std::cout << "(" << i << "," << j << ")\n";
            return 0;
        }
        if (*run_cmd) {
            OpMatrix m = load_opm(opm);
            Opa a = load_opa(system, m);
            OpWord x = load_word(word);
            RunResult r = run(a, x);
            if (!r.accepted) {
                std::cout << "rejected; longest prefix consumed: " << r.longest_prefix << "\n";
                return 1;
            }
            std::cout << "accepted\n";
            for (std::size_t k = 0; k < r.witness->moves.size(); ++k) {
                std::cout << to_string(r.witness->moves[k]) << "\t" << show(r.witness->configurations[k + 1], a, x) << "\n";
            }
            return 0;
        }
        if (*build_cmd) {
            OpMatrix m = load_opm(opm);
            Tableau t = build_tableau(parse_formula(formula), m);
            std::cout << write_opa(t.automaton);
            if (stats) {
                std::cout << "// closure " << t.stats.closure_size << "\n"
                          << "// states " << t.stats.states << " initial " << t.stats.initial << " final " << t.stats.final
                          << "\n"
                          << "// push " << t.stats.push << " shift " << t.stats.shift << " pop " << t.stats.pop << "\n";
            }
            return 0;
        }
        if (*rewrite_cmd) {
            OpMatrix m = load_opm(opm);
            Formula f = parse_formula(formula);
            Formula g = eliminate_hierarchical(ApContext{m, letter_mode(letters)}, f);
            std::cout << to_string(g) << "\n";
            if (stats) std::cout << "// size " << size(f) << " -> " << size(g) << "\n";
            return 0;
        }
        if (*nw_cmd) {
            if (word.empty() && formula.empty()) throw InputError(0, "give --word and/or --formula");
            if (!formula.empty()) std::cout << "formula: " << to_string(translate_formula(parse_nwtl(formula))) << "\n";
            if (!word.empty()) {
                NestedWord nw = with_file(word, parse_nested_word);
                auto [x, m] = translate_word(nw);
                std::cout << "word: " << word_text(x) << "\n";
                if (!out_word.empty()) write_file(out_word, word_text(x) + "\n");
                if (!out_opm.empty()) write_file(out_opm, write_opm(m));
            }
            return 0;
        }
        if (*check_cmd) {
            OpMatrix m = load_opm(opm);
            Formula f = parse_formula(formula);
            std::optional<Opa> sys;
            if (!system.empty()) {
                sys = load_opa(system, m);
                m = sys->matrix();
            }
            CheckReport r = check(m, f, bound, sys ? &*sys : nullptr);
            std::cout << to_string(r.verdict) << " (bound " << r.bound << ")\n";
            if (r.counterexample) {
                std::cout << "counterexample: " << r.counterexample->to_string() << "\n"
                          << "fails at position " << r.failing_position << "\n";
            }
            if (stats) {
                std::cout << "// negation automaton: closure " << r.tableau.closure_size << ", states " << r.tableau.states
                          << ", searched states " << r.search_states << "\n"
                          << "// time " << r.seconds << " s\n";
            }
            return r.counterexample ? 1 : 0;
        }
    } catch (const OracleDisagreement& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
