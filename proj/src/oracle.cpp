#include "archsheaf/oracle.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <unordered_map>

#include "archsheaf/consistency.hpp"

namespace archsheaf::oracle {

namespace {

std::uint64_t randint(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
    return lo + rng() % (hi - lo + 1);  // inclusive; tiny modulo bias is irrelevant here
}

std::uint64_t mul_sat(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a > UINT64_MAX / b) return UINT64_MAX;
    return a * b;
}

// ---------------------------------------------------------------------------
// Raw data model.  Everything below works on plain index/value tuples read
// off the instance data, sharing no code path with the presheaf/consistency
// machinery it is used to certify.
// ---------------------------------------------------------------------------

struct RawInstance {
    std::size_t n = 0;                             // points
    std::vector<std::uint32_t> domain_size;        // per point
    std::vector<std::vector<std::uint32_t>> open;  // per cover view, sorted point indices
    std::vector<std::uint32_t> target;             // union of the opens, sorted
};

RawInstance raw_of(const SmallInstance& instance) {
    RawInstance raw;
    const Site& site = *instance.site;
    raw.n = site.point_count();
    raw.domain_size.reserve(raw.n);
    for (std::size_t x = 0; x < raw.n; ++x) {
        raw.domain_size.push_back(static_cast<std::uint32_t>(instance.presheaf->domain_size(x)));
    }
    for (const std::string& view : instance.cover_views) {
        std::vector<std::uint32_t> pts;
        for (std::size_t x = 0; x < raw.n; ++x) {
            if (site.point(x).end_a == view || site.point(x).end_b == view) {
                pts.push_back(static_cast<std::uint32_t>(x));
            }
        }
        raw.open.push_back(std::move(pts));
    }
    for (const auto& open : raw.open) {
        raw.target.insert(raw.target.end(), open.begin(), open.end());
    }
    std::sort(raw.target.begin(), raw.target.end());
    raw.target.erase(std::unique(raw.target.begin(), raw.target.end()), raw.target.end());
    return raw;
}

std::uint64_t tuple_count(const RawInstance& raw, const std::vector<std::uint32_t>& pts) {
    std::uint64_t count = 1;
    for (std::uint32_t x : pts) count = mul_sat(count, raw.domain_size[x]);
    return count;
}

// All value tuples over `pts`, lexicographic, leftmost slot most significant.
std::vector<std::vector<std::uint32_t>> enumerate_tuples(const RawInstance& raw,
                                                         const std::vector<std::uint32_t>& pts) {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> current(pts.size(), 0);
    while (true) {
        out.push_back(current);
        std::size_t slot = current.size();
        while (slot > 0) {
            --slot;
            if (++current[slot] < raw.domain_size[pts[slot]]) break;
            current[slot] = 0;
            if (slot == 0) return out;
        }
        if (pts.empty()) return out;
    }
}

// Restriction of a tuple over `super` to the points of `sub` (sub <= super).
std::vector<std::uint32_t> raw_restrict(const std::vector<std::uint32_t>& tuple,
                                        const std::vector<std::uint32_t>& super,
                                        const std::vector<std::uint32_t>& sub) {
    std::vector<std::uint32_t> out;
    out.reserve(sub.size());
    std::size_t cursor = 0;
    for (std::uint32_t x : sub) {
        while (super[cursor] != x) ++cursor;
        out.push_back(tuple[cursor]);
    }
    return out;
}

// Section index of a tuple: mixed radix, last slot fastest, matching the
// lexicographic enumeration order.
std::uint64_t tuple_key(const RawInstance& raw, const std::vector<std::uint32_t>& pts,
                        const std::vector<std::uint32_t>& tuple) {
    std::uint64_t key = 0;
    for (std::size_t slot = 0; slot < pts.size(); ++slot) {
        key = key * raw.domain_size[pts[slot]] + tuple[slot];
    }
    return key;
}

struct OverlapSlots {
    std::size_t view_a, view_b;
    std::vector<std::pair<std::size_t, std::size_t>> slots;  // (slot in a, slot in b)
};

std::vector<OverlapSlots> overlap_table(const RawInstance& raw) {
    std::vector<OverlapSlots> table;
    for (std::size_t a = 0; a < raw.open.size(); ++a) {
        for (std::size_t b = a + 1; b < raw.open.size(); ++b) {
            OverlapSlots entry{a, b, {}};
            for (std::size_t i = 0; i < raw.open[a].size(); ++i) {
                for (std::size_t j = 0; j < raw.open[b].size(); ++j) {
                    if (raw.open[a][i] == raw.open[b][j]) entry.slots.emplace_back(i, j);
                }
            }
            table.push_back(std::move(entry));
        }
    }
    return table;
}

bool raw_compatible(const std::vector<OverlapSlots>& overlaps,
                    const std::vector<const std::vector<std::uint32_t>*>& tuples) {
    for (const OverlapSlots& entry : overlaps) {
        for (const auto& [i, j] : entry.slots) {
            if ((*tuples[entry.view_a])[i] != (*tuples[entry.view_b])[j]) return false;
        }
    }
    return true;
}

std::string describe_family(const SmallInstance& instance, const RawInstance& raw,
                            const std::vector<const std::vector<std::uint32_t>*>& tuples) {
    std::ostringstream out;
    for (std::size_t v = 0; v < raw.open.size(); ++v) {
        if (v) out << "; ";
        out << instance.cover_views[v] << "={";
        for (std::size_t slot = 0; slot < raw.open[v].size(); ++slot) {
            if (slot) out << ", ";
            out << instance.site->point(raw.open[v][slot]).name << "=" << (*tuples[v])[slot];
        }
        out << "}";
    }
    return out.str();
}

}  // namespace

SmallInstance gen_instance(std::uint64_t seed, const Bounds& bounds) {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL);

    std::size_t views = randint(rng, std::max<std::size_t>(2, bounds.min_views),
                                std::max<std::size_t>(2, bounds.max_views));
    std::size_t points = randint(rng, bounds.min_points, bounds.max_points);

    SiteSpec spec;
    for (std::size_t v = 0; v < views; ++v) spec.views.push_back({"v" + std::to_string(v)});
    for (std::size_t x = 0; x < points; ++x) {
        std::size_t a = randint(rng, 0, views - 1);
        std::size_t b = randint(rng, 0, views - 2);
        if (b >= a) ++b;
        spec.points.push_back({"x" + std::to_string(x), spec.views[a].name, spec.views[b].name});
    }

    SmallInstance instance;
    instance.seed = seed;
    instance.site = Site::create(spec);

    std::vector<ParameterDomain> domains;
    for (std::size_t x = 0; x < points; ++x) {
        std::size_t size = randint(rng, std::max<std::size_t>(1, bounds.min_domain),
                                   std::max<std::size_t>(1, bounds.max_domain));
        domains.push_back(ParameterDomain::fin(spec.points[x].name, size));
    }
    instance.presheaf = Presheaf::create(instance.site, domains);

    for (const ViewDecl& v : spec.views) instance.cover_views.push_back(v.name);

    // Document form, with one random (not necessarily compatible) design per view.
    instance.doc.version = kFormatVersion;
    for (const ViewDecl& v : spec.views) instance.doc.views.push_back(v.name);
    for (const InterfacePoint& p : spec.points) {
        instance.doc.interfaces.push_back({p.name, p.end_a, p.end_b});
    }
    for (std::size_t x = 0; x < points; ++x) {
        instance.doc.domains.push_back({spec.points[x].name, domains[x].values, true});
    }
    for (const ViewDecl& v : spec.views) {
        DesignDecl design;
        design.label = "d_" + v.name;
        design.view = v.name;
        for (std::size_t x = 0; x < points; ++x) {
            if (!spec.points[x].touches(v.name)) continue;
            std::size_t pick = randint(rng, 0, domains[x].values.size() - 1);
            design.assign.emplace_back(spec.points[x].name, domains[x].values[pick]);
        }
        instance.doc.designs.push_back(std::move(design));
    }

    std::size_t map_count = std::max<std::size_t>(1, bounds.property_maps);
    for (std::size_t m = 0; m < map_count; ++m) {
        std::string name = "prop" + std::to_string(m);
        PropertyDecl decl;
        decl.name = name;
        std::map<std::string, PropertyMap::LabelMap> per_point;
        std::vector<ParameterDomain> derived;
        for (std::size_t x = 0; x < points; ++x) {
            const std::string& point = spec.points[x].name;
            PropertyMap::LabelMap labels;
            ParameterDomain codomain{point, {}};
            if (m == 0) {
                // The identity map, always included.
                codomain.values = domains[x].values;
                for (const std::string& v : domains[x].values) labels[v] = v;
            } else {
                std::size_t image_size = randint(rng, 1, domains[x].values.size());
                for (std::size_t q = 0; q < image_size; ++q) {
                    codomain.values.push_back("q" + std::to_string(q));
                }
                for (const std::string& v : domains[x].values) {
                    labels[v] = codomain.values[randint(rng, 0, image_size - 1)];
                }
            }
            std::vector<std::pair<std::string, std::string>> table;
            for (const std::string& v : domains[x].values) table.emplace_back(v, labels[v]);
            decl.per_point.emplace_back(point, std::move(table));
            decl.derived_domains.push_back({point, codomain.values, false});
            per_point[point] = std::move(labels);
            derived.push_back(std::move(codomain));
        }
        instance.property_maps.push_back(
            PropertyMap::create(instance.presheaf, name, per_point, std::move(derived)));
        instance.doc.properties.push_back(std::move(decl));
    }
    return instance;
}

bool CertReport::all_held() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CertCheck& c) { return c.held; });
}

std::string CertReport::summary() const {
    std::ostringstream out;
    out << "seed " << seed << ": " << (all_held() ? "ok" : "FAILED");
    if (sampled) out << " (sampled)";
    for (const CertCheck& c : checks) {
        out << "; " << c.name << (c.held ? " held" : " FAILED") << " (" << c.cases << ")";
    }
    return out.str();
}

CertReport certify(const SmallInstance& instance, const CertifyOptions& options) {
    CertReport report;
    report.seed = instance.seed;
    RawInstance raw = raw_of(instance);
    const auto& presheaf = instance.presheaf;

    // Engine-side opens for the same cover.
    std::vector<OpenSet> engine_opens;
    for (const std::string& view : instance.cover_views) {
        engine_opens.push_back(instance.site->view_open(view));
    }
    OpenSet engine_target = union_all(instance.site, engine_opens);

    // Per-view tuple tables and candidate sections over the union.  The
    // candidate space must be materialized in full for the gluing side, so
    // oversized instances are a contract violation rather than a sampling
    // case.
    if (tuple_count(raw, raw.target) > (1ULL << 20)) {
        throw CapExceededError("instance candidate space too large for certification",
                               tuple_count(raw, raw.target));
    }
    std::vector<std::vector<std::vector<std::uint32_t>>> view_tuples;
    std::vector<std::uint64_t> view_counts;
    std::uint64_t family_count = 1;
    for (const auto& open : raw.open) {
        view_tuples.push_back(enumerate_tuples(raw, open));
        view_counts.push_back(view_tuples.back().size());
        family_count = mul_sat(family_count, view_counts.back());
    }
    // Family keys are packed in mixed radix over the per-view section counts.
    if (family_count > (1ULL << 62)) {
        throw CapExceededError("instance family space too large for certification",
                               family_count);
    }
    std::vector<std::vector<std::uint32_t>> candidates = enumerate_tuples(raw, raw.target);

    // Family key of a candidate: the tuple of its per-view restriction keys,
    // packed in mixed radix over the per-view section counts.
    auto family_key_of = [&](const std::vector<std::uint32_t>& candidate) {
        std::uint64_t key = 0;
        for (std::size_t v = 0; v < raw.open.size(); ++v) {
            std::vector<std::uint32_t> restricted =
                raw_restrict(candidate, raw.target, raw.open[v]);
            key = key * view_counts[v] + tuple_key(raw, raw.open[v], restricted);
        }
        return key;
    };

    std::unordered_map<std::uint64_t, std::uint32_t> glue_count;
    std::unordered_map<std::uint64_t, std::size_t> glue_candidate;  // family key -> candidate idx
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        std::uint64_t key = family_key_of(candidates[c]);
        ++glue_count[key];
        glue_candidate.emplace(key, c);
    }

    std::vector<OverlapSlots> overlaps = overlap_table(raw);

    // --- pairwise-equivalence: compatible <=> exactly one gluing -----------
    CertCheck equivalence{"pairwise-equivalence"};
    std::vector<std::uint64_t> compatible_keys;  // reused by later checks
    std::mt19937_64 sample_rng(instance.seed ^ 0xA5A5A5A55A5A5A5AULL);

    std::vector<const std::vector<std::uint32_t>*> tuples(raw.open.size());
    auto check_family = [&](const std::vector<std::size_t>& pick) {
        std::uint64_t key = 0;
        for (std::size_t v = 0; v < raw.open.size(); ++v) {
            tuples[v] = &view_tuples[v][pick[v]];
            key = key * view_counts[v] + pick[v];
        }
        bool compatible = raw_compatible(overlaps, tuples);
        auto it = glue_count.find(key);
        std::uint32_t gluings = it == glue_count.end() ? 0 : it->second;
        ++equivalence.cases;
        if (compatible != (gluings == 1)) {
            equivalence.held = false;
            if (equivalence.failures.size() < 4) {
                std::ostringstream msg;
                msg << describe_family(instance, raw, tuples) << " compatible=" << compatible
                    << " gluings=" << gluings;
                equivalence.failures.push_back(msg.str());
            }
        }
        if (compatible) compatible_keys.push_back(key);
        return compatible;
    };

    bool exhaustive_families = family_count <= options.family_cap;
    if (exhaustive_families) {
        std::vector<std::size_t> pick(raw.open.size(), 0);
        bool more = true;
        while (more) {
            check_family(pick);
            more = false;
            std::size_t v = pick.size();
            while (v > 0) {
                --v;
                if (++pick[v] < view_counts[v]) {
                    more = true;
                    break;
                }
                pick[v] = 0;
            }
            if (pick.empty()) break;
        }
    } else {
        report.sampled = true;
        equivalence.note = "sampled (" + std::to_string(options.sample_families) + " of " +
                           std::to_string(family_count) + " families)";
        for (std::uint64_t draw = 0; draw < options.sample_families; ++draw) {
            std::vector<std::size_t> pick(raw.open.size());
            for (std::size_t v = 0; v < raw.open.size(); ++v) {
                pick[v] = static_cast<std::size_t>(randint(sample_rng, 0, view_counts[v] - 1));
            }
            check_family(pick);
        }
        // Every glueable family is compatible regardless of sampling; sweep
        // the (small) candidate list so the compatible side is complete.
        compatible_keys.clear();
        for (const auto& [key, count] : glue_count) compatible_keys.push_back(key);
    }
    std::sort(compatible_keys.begin(), compatible_keys.end());
    compatible_keys.erase(std::unique(compatible_keys.begin(), compatible_keys.end()),
                          compatible_keys.end());
    report.families_examined = equivalence.cases;
    report.compatible_families = compatible_keys.size();
    report.checks.push_back(std::move(equivalence));

    // --- engine-agreement: typed engine verdicts match the raw ones --------
    CertCheck agreement{"engine-agreement"};
    auto unpack = [&](std::uint64_t key) {
        std::vector<std::size_t> pick(raw.open.size());
        for (std::size_t v = raw.open.size(); v > 0;) {
            --v;
            pick[v] = static_cast<std::size_t>(key % view_counts[v]);
            key /= view_counts[v];
        }
        return pick;
    };
    auto engine_family = [&](const std::vector<std::size_t>& pick) {
        std::vector<FamilyMember> members;
        for (std::size_t v = 0; v < raw.open.size(); ++v) {
            members.push_back(
                {instance.cover_views[v],
                 presheaf->section_from_indices(engine_opens[v], view_tuples[v][pick[v]])});
        }
        return LocalFamily::create(presheaf, std::move(members));
    };

    std::vector<std::uint64_t> selected = compatible_keys;
    std::uint64_t extra = options.engine_sample;
    for (std::uint64_t key = 0; key < family_count && extra > 0; ++key, --extra) {
        selected.push_back(key);
    }
    std::sort(selected.begin(), selected.end());
    selected.erase(std::unique(selected.begin(), selected.end()), selected.end());

    if (selected.size() > options.engine_sample * 4) {
        selected.resize(static_cast<std::size_t>(options.engine_sample * 4));
    }
    for (std::uint64_t key : selected) {
        std::vector<std::size_t> pick = unpack(key);
        for (std::size_t v = 0; v < raw.open.size(); ++v) tuples[v] = &view_tuples[v][pick[v]];
        bool raw_verdict = raw_compatible(overlaps, tuples);

        LocalFamily family = engine_family(pick);
        bool engine_verdict = check_pairwise(family).empty();
        ++agreement.cases;
        if (engine_verdict != raw_verdict) {
            agreement.held = false;
            if (agreement.failures.size() < 4) {
                agreement.failures.push_back("check_pairwise disagrees with the raw oracle on " +
                                             describe_family(instance, raw, tuples));
            }
            continue;
        }
        if (raw_verdict) {
            GluingResult glued = glue(family);
            const std::vector<std::uint32_t>& expected = candidates[glue_candidate.at(key)];
            if (glued.glued.values() != expected) {
                agreement.held = false;
                agreement.failures.push_back("glue() differs from the brute-force candidate on " +
                                             describe_family(instance, raw, tuples));
            }
            UniquenessResult uniq = verify_unique(family, glued);
            if (!uniq.unique) {
                agreement.held = false;
                agreement.failures.push_back("verify_unique failed on " +
                                             describe_family(instance, raw, tuples));
            }
        } else {
            bool threw = false;
            try {
                glue(family);
            } catch (const IncompatibleFamilyError& e) {
                threw = !e.report().empty();
            }
            if (!threw) {
                agreement.held = false;
                agreement.failures.push_back(
                    "glue() accepted the incompatible family " +
                    describe_family(instance, raw, tuples));
            }
        }
    }
    report.checks.push_back(std::move(agreement));

    // --- functor-laws -------------------------------------------------------
    CertCheck laws{"functor-laws"};
    LawReport law_report = check_functor_laws(presheaf, 12, options.law_budget, 1);
    laws.held = law_report.holds;
    laws.cases = law_report.checks;
    if (!law_report.exhaustive) {
        laws.note = "sampled";
        report.sampled = true;
    }
    for (const LawCounterexample& c : law_report.counterexamples) {
        laws.failures.push_back(c.law + " law failed for U=" + c.u + " V=" + c.v + " W=" + c.w);
    }
    report.checks.push_back(std::move(laws));

    // --- gluing-round-trip and derived-commutation --------------------------
    CertCheck round_trip{"gluing-round-trip"};
    CertCheck commutation{"derived-commutation"};
    std::uint64_t candidate_limit = candidates.size();
    if (candidate_limit > options.candidate_cap) {
        candidate_limit = options.candidate_cap;
        round_trip.note = commutation.note = "sampled";
        report.sampled = true;
    }
    for (std::uint64_t c = 0; c < candidate_limit; ++c) {
        Section global = presheaf->section_from_indices(
            engine_target, candidates[static_cast<std::size_t>(c)]);
        std::vector<FamilyMember> members;
        for (std::size_t v = 0; v < raw.open.size(); ++v) {
            members.push_back({instance.cover_views[v], restrict(global, engine_opens[v])});
        }
        LocalFamily family = LocalFamily::create(presheaf, std::move(members));

        ++round_trip.cases;
        if (!check_pairwise(family).empty()) {
            round_trip.held = false;
            round_trip.failures.push_back("restriction family of " + global.to_string() +
                                          " is not compatible");
            continue;
        }
        GluingResult reglued = glue(family);
        if (reglued.glued != global) {
            round_trip.held = false;
            round_trip.failures.push_back("restriction family of " + global.to_string() +
                                          " does not re-glue to it");
            continue;
        }

        for (const PropertyMap& map : instance.property_maps) {
            ++commutation.cases;
            if (!derived_glue_commutes(map, family)) {
                commutation.held = false;
                if (commutation.failures.size() < 4) {
                    commutation.failures.push_back("property '" + map.name() +
                                                   "' does not commute with gluing on " +
                                                   global.to_string());
                }
            }
        }
    }
    report.checks.push_back(std::move(round_trip));
    report.checks.push_back(std::move(commutation));

    return report;
}

}  // namespace archsheaf::oracle
