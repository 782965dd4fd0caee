// Acceptance gate: runs every primary criterion at its stated tolerance
// and prints one pass/fail line each. Exit status is the failure count.

#include <cmath>
#include <iostream>
#include <sstream>
#include <string>

#include "gridlight/config.hpp"
#include "gridlight/scenario.hpp"

using namespace gridlight;
using harness::Config;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass,
            const std::string& detail = "") {
    std::cout << (pass ? "PASS" : "FAIL") << "  [" << criterion << "] " << name;
    if (!detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << "\n";
    if (!pass) g_failures++;
}

Config make_config(const std::string& scenario, long shots, int workers = 1) {
    Config c;
    c.set("scenario", scenario);
    c.set("seed", "20260824");
    c.set("shots", std::to_string(shots));
    c.set("workers", std::to_string(workers));
    c.set("events_limit", "1000");
    return c;
}

std::string fmt(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

} // namespace

int main() {
    try {
        // 1. Mach-Zehnder clear: D2 exactly silent, amplitude-level cancellation.
        {
            auto r = harness::run_scenario(make_config("mach_zehnder", 100000));
            bool pass = r.accepted &&
                        r.summary["outcomes"]["D2"]["count"].get<long>() == 0 &&
                        r.summary["outcomes"]["D1"]["count"].get<long>() == 100000 &&
                        r.summary["extra"]["d2_amplitude"].get<double>() < 1e-12;
            report(1, "Mach-Zehnder clear: only D1 fires", pass,
                   "D2 amp " + fmt(r.summary["extra"]["d2_amplitude"].get<double>()));
        }

        // 2. Bomb test: Table-2 frequencies within 3 sigma.
        {
            auto r = harness::run_scenario(make_config("bomb_test", 100000));
            long d2 = r.summary["outcomes"]["D2"]["count"].get<long>();
            report(2, "bomb test: (D1, D2, bomb) within 3 sigma of (0.25, 0.25, 0.5)",
                   r.accepted && d2 > 0,
                   "D2 freq " + fmt(r.summary["outcomes"]["D2"]["frequency"].get<double>()));
        }

        // 3. Double slit: chi-square vs oracle pattern, extrema aligned,
        //    central maximum on the midline.
        {
            auto r = harness::run_scenario(make_config("double_slit", 100000));
            bool pass = r.accepted &&
                        r.summary["statistics"]["p_value"].get<double>() > 0.001 &&
                        r.summary["extra"]["fringe_maxima_match"].get<bool>() &&
                        r.summary["extra"]["central_maximum_at_midline"].get<bool>();
            report(3, "double slit: histogram matches two-path oracle", pass,
                   "p " + fmt(r.summary["statistics"]["p_value"].get<double>()));
        }

        // 4. Which-way: 50/50 slit counts, flat screen, no fringe component.
        {
            auto r = harness::run_scenario(make_config("which_way", 100000));
            bool pass = r.accepted &&
                        r.summary["extra"]["interference_absent"].get<bool>();
            report(4, "which-way: interference statistically absent", pass,
                   "z " + fmt(r.summary["extra"]["interference_z"].get<double>()));
        }

        // 5. Delayed choice: toggle before vs after slit passage indistinguishable.
        {
            auto r = harness::run_scenario(make_config("delayed_choice", 100000));
            report(5, "delayed choice: before/after distributions indistinguishable",
                   r.accepted,
                   "screen p " +
                       fmt(r.summary["statistics"]["screen_two_sample_p"].get<double>()) +
                       ", telescope p " +
                       fmt(r.summary["statistics"]["telescope_two_sample_p"].get<double>()));
        }

        // 6. Polarizer chain: Malus at five angles plus the 45-degree insert.
        {
            auto r = harness::run_scenario(make_config("polarizer_chain", 100000));
            report(6, "polarizer chain: cos^2 rates and 12.5% insert chain", r.accepted,
                   "insert freq " +
                       fmt(r.summary["outcomes"]["crossed_with_insert"]["frequency"]
                               .get<double>()));
        }

        // 7. Entanglement: exact same-angle anti-correlation, CHSH 2.828 +- 0.05,
        //    measurement-order invariance.
        {
            auto r = harness::run_scenario(make_config("entangled_chsh", 1000000));
            bool pass = r.accepted &&
                        r.summary["extra"]["same_angle_violations"].get<long>() == 0 &&
                        std::fabs(r.summary["extra"]["S"].get<double>() -
                                  r.summary["extra"]["S_oracle"].get<double>()) <= 0.05;
            report(7, "entanglement: anti-correlation exact, CHSH 2.828 +- 0.05", pass,
                   "S " + fmt(r.summary["extra"]["S"].get<double>()));
        }

        // 8 & 9. Conservation over 1e4 ticks and the ordering property come
        // from the invariant audit; scenario-level drift is checked too.
        {
            std::ostringstream audit;
            harness::run_audit(audit);
            bool conservation = true;
            bool ordering = true;
            std::istringstream lines(audit.str());
            std::string line;
            while (std::getline(lines, line)) {
                bool pass = line.substr(0, 4) == "PASS";
                if (line.find("conservation") != std::string::npos && !pass) {
                    conservation = false;
                }
                if (line.find("ordering") != std::string::npos && !pass) {
                    ordering = false;
                }
            }
            auto ds = harness::run_scenario(make_config("double_slit", 1000));
            conservation = conservation &&
                ds.summary["audits"]["conservation_drift"].get<double>() < 1e-9;
            report(8, "conservation of processing: drift < 1e-9 over 1e4 ticks",
                   conservation,
                   "scenario drift " +
                       fmt(ds.summary["audits"]["conservation_drift"].get<double>()));
            report(9, "ordering invariant over 100 random media profiles", ordering);
        }

        // 10. Least action and refraction.
        {
            auto refr = harness::run_scenario(make_config("refraction", 0));
            auto least = harness::run_scenario(make_config("least_action", 0));
            bool pass = refr.accepted && least.accepted;
            report(10, "least action: Snell bend within 1 degree, straight free paths",
                   pass,
                   "theta2 " + fmt(refr.summary["extra"]["theta2_deg"].get<double>()) +
                       " vs Snell " +
                       fmt(refr.summary["extra"]["snell_theta2_deg"].get<double>()));
        }

        // 11. Uncertainty floor across packet families.
        {
            auto r = harness::run_scenario(make_config("packet_uncertainty", 0));
            report(11, "uncertainty: sigma_x * sigma_k >= 0.5 for all families",
                   r.accepted);
        }

        // 12. Determinism across reruns and worker counts.
        {
            auto a = harness::run_scenario(make_config("double_slit", 100000, 1));
            auto b = harness::run_scenario(make_config("double_slit", 100000, 1));
            auto c = harness::run_scenario(make_config("double_slit", 100000, 4));
            auto strip = [](harness::Json s) {
                s.erase("timing");
                return s.dump();
            };
            bool pass = strip(a.summary) == strip(b.summary) &&
                        strip(a.summary) == strip(c.summary);
            report(12, "determinism: byte-identical output across runs and workers",
                   pass);
        }
    } catch (const std::exception& e) {
        std::cout << "FAIL  acceptance run aborted: " << e.what() << "\n";
        g_failures++;
    }

    std::cout << (g_failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED") << " ("
              << g_failures << " failing criteria)\n";
    return g_failures;
}
