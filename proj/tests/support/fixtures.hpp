#ifndef ARCHSHEAF_TESTS_FIXTURES_HPP
#define ARCHSHEAF_TESTS_FIXTURES_HPP

// In-memory copies of the bundled three-view instance, plus small helpers
// shared across the test binaries.

#include <memory>
#include <string>
#include <vector>

#include "archsheaf/consistency.hpp"
#include "archsheaf/presheaf.hpp"
#include "archsheaf/topology.hpp"

namespace testutil {

inline std::shared_ptr<const archsheaf::Site> three_view_site() {
    archsheaf::SiteSpec spec;
    spec.views = {{"electrical"}, {"thermal"}, {"mechanical"}};
    spec.points = {{"EM", "electrical", "mechanical"},
                   {"ET", "electrical", "thermal"},
                   {"TM", "thermal", "mechanical"}};
    return archsheaf::Site::create(spec);
}

inline std::shared_ptr<const archsheaf::Presheaf> three_view_presheaf(
    std::shared_ptr<const archsheaf::Site> site = {}) {
    if (!site) site = three_view_site();
    std::vector<archsheaf::ParameterDomain> domains;
    domains.push_back(archsheaf::ParameterDomain::fin("EM", 4));
    domains.push_back(archsheaf::ParameterDomain::fin("ET", 3));
    domains.push_back(archsheaf::ParameterDomain::fin("TM", 5));
    return archsheaf::Presheaf::create(std::move(site), std::move(domains));
}

struct ThreeViewValues {
    std::string elec_em = "2", elec_et = "1";
    std::string therm_et = "1", therm_tm = "4";
    std::string mech_em = "2", mech_tm = "4";
};

inline archsheaf::LocalFamily three_view_family(
    const std::shared_ptr<const archsheaf::Presheaf>& presheaf,
    const ThreeViewValues& v = {}) {
    using Pair = std::pair<std::string, std::string>;
    const auto& site = presheaf->site();
    std::vector<Pair> elec{{"EM", v.elec_em}, {"ET", v.elec_et}};
    std::vector<Pair> therm{{"ET", v.therm_et}, {"TM", v.therm_tm}};
    std::vector<Pair> mech{{"EM", v.mech_em}, {"TM", v.mech_tm}};
    std::vector<archsheaf::FamilyMember> members;
    members.push_back({"elec", presheaf->section(site->view_open("electrical"), elec)});
    members.push_back({"therm", presheaf->section(site->view_open("thermal"), therm)});
    members.push_back({"mech", presheaf->section(site->view_open("mechanical"), mech)});
    return archsheaf::LocalFamily::create(presheaf, std::move(members));
}

}  // namespace testutil

#endif
