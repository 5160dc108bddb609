#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "opkern/ainf.hpp"
#include "opkern/bm.hpp"
#include "opkern/json_io.hpp"
#include "opkern/moduli.hpp"
#include "opkern/operad.hpp"
#include "opkern/report.hpp"
#include "opkern/suite.hpp"

namespace {

using opk::Certificate;

struct GlobalOptions {
    std::uint64_t seed = 0;
    int workers = 1;
    std::uint64_t budget = 1ull << 24;
    bool timing = false;
    std::string out_path;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << data;
}

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

/* Certificate envelope: the digest covers the semantic command and every
 * input file read. The echoed command deliberately excludes --workers, --out
 * and --timing (execution environment, not inputs), and timing goes to
 * stderr unless asked for, so default output is byte-identical across
 * reruns and worker counts. */
int emit(const GlobalOptions& g, const std::vector<std::string>& command,
         const std::vector<std::string>& input_blobs, const std::string& result_json, bool ok,
         double seconds) {
    Certificate cert;
    cert.command = command;
    std::uint64_t h = 14695981039346656037ull;
    for (const std::string& arg : command) h = opk::fnv1a64(arg, opk::fnv1a64("\0", h));
    for (const std::string& blob : input_blobs) h = opk::fnv1a64(blob, h);
    cert.inputs_digest = opk::digest_hex(h);
    cert.seed = g.seed;
    cert.result_json = result_json;
    cert.timing_seconds = seconds;
    std::string text = opk::serialize_certificate(cert, g.timing);
    if (g.out_path.empty())
        std::cout << text;
    else
        write_file(g.out_path, text);
    std::cerr << "elapsed: " << seconds << " s\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"opkern: exact kernel for non-symmetric operads, A-infinity structures, "
                 "structure-constant moduli and the representing CDGA"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    GlobalOptions g;
    if (const char* env = std::getenv("OPKERN_BUDGET")) g.budget = std::strtoull(env, nullptr, 10);
    app.add_option("--seed", g.seed, "seed for randomized checks (recorded in certificates)");
    app.add_option("--workers", g.workers, "worker threads (results are deterministic regardless)");
    app.add_option("--budget", g.budget,
                   "enumeration budget in candidate tensors (env OPKERN_BUDGET)");
    app.add_flag("--timing", g.timing, "include wall-clock timing in the certificate");
    app.add_option("--out", g.out_path, "write the certificate to this file instead of stdout");

    auto* operad_cmd = app.add_subcommand("operad", "explicit operad tables");
    auto* operad_check = operad_cmd->add_subcommand("check", "verify the operad axioms");
    std::string operad_file;
    int operad_arity = 4;
    operad_check->add_option("--operad", operad_file, "operad JSON file")->required();
    operad_check->add_option("--max-arity", operad_arity, "arity bound");
    auto* operad_end = operad_cmd->add_subcommand("end", "endomorphism operad of a complex");
    std::string complex_file;
    bool end_check = false;
    operad_end->add_option("--complex", complex_file, "chain complex JSON file")->required();
    operad_end->add_option("--max-arity", operad_arity, "arity bound");
    operad_end->add_flag("--check", end_check, "also run the axiom checker");

    auto* ainf_cmd = app.add_subcommand("ainf", "the A-infinity operad");
    auto* ainf_certify = ainf_cmd->add_subcommand("certify", "certify d^2 = 0 symbolically");
    int ainf_arity = 7;
    ainf_certify->add_option("--max-arity", ainf_arity, "top generator arity");
    auto* ainf_check = ainf_cmd->add_subcommand("check", "check the Stasheff identities");
    std::string structure_file;
    int stasheff_arity = 0;
    ainf_check->add_option("--structure", structure_file, "A-infinity structure JSON")->required();
    ainf_check->add_option("--max-arity", stasheff_arity, "bound (default: all operations present)");

    auto* moduli_cmd = app.add_subcommand("moduli", "structure-constant moduli");
    auto* moduli_ideal = moduli_cmd->add_subcommand("ideal", "emit the defining ideal");
    int mod_n = 1;
    bool mod_unital = false;
    moduli_ideal->add_option("--n", mod_n, "rank")->required();
    moduli_ideal->add_flag("--unital", mod_unital, "the unital ideal (extra unit variables)");
    auto* moduli_enum = moduli_cmd->add_subcommand("enumerate", "enumerate F_q points");
    std::uint64_t mod_q = 2;
    bool mod_orbits = false;
    moduli_enum->add_option("--n", mod_n, "rank")->required();
    moduli_enum->add_option("--q", mod_q, "field size (prime)")->required();
    moduli_enum->add_flag("--unital", mod_unital, "keep only unital points");
    moduli_enum->add_flag("--orbits", mod_orbits, "partition into GL_n(F_q) orbits");

    auto* bm_cmd = app.add_subcommand("bm", "the representing CDGA B_m");
    auto* bm_build = bm_cmd->add_subcommand("build", "build the truncation B_{m,r}");
    int bm_m = 0, bm_r = 2;
    bool bm_certify = false, bm_linear = false;
    bm_build->add_option("--m", bm_m, "suspension degree m")->required();
    bm_build->add_option("--r", bm_r, "truncation arity r")->required();
    bm_build->add_flag("--certify", bm_certify, "certify d^2 = 0");
    bm_build->add_flag("--linear-part", bm_linear, "include the linear-part analysis");
    auto* bm_point = bm_cmd->add_subcommand("point-check", "check a dg point of B_{m,r}");
    std::string target_file, assign_file;
    bm_point->add_option("--m", bm_m, "suspension degree m")->required();
    bm_point->add_option("--r", bm_r, "truncation arity r")->required();
    bm_point->add_option("--target", target_file, "target CDGA JSON")->required();
    bm_point->add_option("--assign", assign_file, "assignment JSON")->required();

    auto* suite_cmd = app.add_subcommand("suite", "run the full acceptance suite");

    CLI11_PARSE(app, argc, argv);

    if (g.budget == 0 || g.workers < 1) {
        std::cerr << "error: budget must be positive and workers >= 1\n";
        return 2;
    }

    try {
        Timer timer;
        if (operad_check->parsed()) {
            std::vector<std::string> command{"operad", "check", "--operad", operad_file,
                                             "--max-arity", std::to_string(operad_arity)};
            std::string blob = slurp(operad_file);
            opk::OperadPtr table = opk::operad_from_json(blob);
            opk::OperadReport report =
                opk::check_operad_axioms(*table, std::min(operad_arity, table->max_arity), g.workers);
            return emit(g, command, {blob}, opk::report_to_json(report), report.ok, timer.seconds());
        }
        if (operad_end->parsed()) {
            std::vector<std::string> command{"operad", "end", "--complex", complex_file,
                                             "--max-arity", std::to_string(operad_arity)};
            if (end_check) command.push_back("--check");
            std::string blob = slurp(complex_file);
            opk::ChainComplex m = opk::complex_from_json(blob);
            opk::EndOperad end = opk::end_operad(m, operad_arity);
            nlohmann::json result;
            for (int n = 0; n <= operad_arity; ++n)
                result["dimensions"][std::to_string(n)] = end.table->component(n).dim();
            bool ok = true;
            if (end_check) {
                opk::OperadReport report = opk::check_operad_axioms(*end.table, operad_arity, g.workers);
                result["check"] = nlohmann::json::parse(opk::report_to_json(report));
                ok = report.ok;
            }
            return emit(g, command, {blob}, result.dump(), ok, timer.seconds());
        }
        if (ainf_certify->parsed()) {
            std::vector<std::string> command{"ainf", "certify", "--max-arity",
                                             std::to_string(ainf_arity)};
            opk::DSquaredReport report = opk::certify_ainf_d_squared(ainf_arity, g.workers);
            return emit(g, command, {}, opk::report_to_json(report), report.ok, timer.seconds());
        }
        if (ainf_check->parsed()) {
            std::vector<std::string> command{"ainf", "check", "--structure", structure_file};
            if (stasheff_arity > 0) {
                command.push_back("--max-arity");
                command.push_back(std::to_string(stasheff_arity));
            }
            std::string blob = slurp(structure_file);
            opk::AInfStructure s = opk::ainf_structure_from_json(blob);
            int bound = stasheff_arity > 0 ? stasheff_arity
                                           : (s.ops.empty() ? 2 : s.ops.rbegin()->first);
            opk::StasheffReport report = opk::check_stasheff(s, bound, g.workers);
            return emit(g, command, {blob}, opk::report_to_json(report), report.ok, timer.seconds());
        }
        if (moduli_ideal->parsed()) {
            opk::PolyIdeal ideal = mod_unital ? opk::unital_ideal(mod_n) : opk::assoc_ideal(mod_n);
            std::string payload = opk::ideal_to_json(ideal);
            if (g.out_path.empty()) {
                std::cout << payload;
            } else {
                write_file(g.out_path, payload);
                std::cerr << "wrote " << g.out_path << "\n";
            }
            std::cerr << "elapsed: " << timer.seconds() << " s\n";
            return 0;
        }
        if (moduli_enum->parsed()) {
            std::vector<std::string> command{"moduli", "enumerate", "--n", std::to_string(mod_n),
                                             "--q", std::to_string(mod_q)};
            if (mod_unital) command.push_back("--unital");
            if (mod_orbits) command.push_back("--orbits");
            opk::EnumerationResult e =
                opk::enumerate_points(mod_n, mod_q, mod_unital, g.budget, g.workers);
            opk::OrbitData orbits;
            bool have_orbits = false;
            if (mod_orbits) {
                std::vector<opk::SCTensor> tensors;
                for (const auto& p : e.points) tensors.push_back(p.tensor);
                orbits = opk::gl_orbits(tensors, mod_n, mod_q, g.budget);
                have_orbits = true;
            }
            std::string payload = opk::enumeration_to_json(e, have_orbits ? &orbits : nullptr);
            return emit(g, command, {}, nlohmann::json::parse(payload).dump(), true, timer.seconds());
        }
        if (bm_build->parsed()) {
            std::vector<std::string> command{"bm", "build", "--m", std::to_string(bm_m),
                                             "--r", std::to_string(bm_r)};
            if (bm_certify) command.push_back("--certify");
            if (bm_linear) command.push_back("--linear-part");
            opk::BmAlgebra b = opk::build_bm(bm_m, bm_r);
            opk::LinearPartReport lp;
            opk::BmReport certify;
            bool ok = true;
            if (bm_linear) lp = opk::linear_part(b);
            if (bm_certify) {
                certify = opk::certify_bm_d_squared(bm_m, bm_r, g.workers);
                ok = certify.ok;
            }
            std::string payload =
                opk::bm_to_json(b, bm_linear ? &lp : nullptr, bm_certify ? &certify : nullptr);
            GlobalOptions g2 = g;
            if (!g.out_path.empty()) {
                write_file(g.out_path, payload);  // the artifact itself goes to the file
                g2.out_path.clear();
            }
            return emit(g2, command, {}, nlohmann::json::parse(payload).dump(), ok, timer.seconds());
        }
        if (bm_point->parsed()) {
            std::vector<std::string> command{"bm", "point-check", "--m", std::to_string(bm_m),
                                             "--r", std::to_string(bm_r),
                                             "--target", target_file, "--assign", assign_file};
            std::string target_blob = slurp(target_file);
            std::string assign_blob = slurp(assign_file);
            opk::Cdga target = opk::cdga_from_json(target_blob);
            std::vector<std::string> problems = target.validate();
            if (!problems.empty()) {
                std::cerr << "error: target is not a CDGA: " << problems.front() << "\n";
                return 2;
            }
            opk::BmAlgebra b = opk::build_bm(bm_m, bm_r);
            opk::BmAssignment assignment =
                opk::assignment_from_json(assign_blob, target.complex.space());
            opk::DgPointReport report = opk::check_dg_point(b, target, assignment);
            return emit(g, command, {target_blob, assign_blob}, opk::report_to_json(report),
                        report.ok, timer.seconds());
        }
        if (suite_cmd->parsed()) {
            opk::SuiteOptions opts;
            opts.workers = g.workers;
            opts.seed = g.seed;
            opts.cli_path = argv[0];
            opk::SuiteResult result = opk::run_acceptance_suite(std::cout, opts);
            std::cout << (result.ok() ? "SUITE PASS" : "SUITE FAIL") << " (" << result.passed
                      << " passed, " << result.failed << " failed)\n";
            return result.ok() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
