#include "kgsq.h"

#include <cstring>
#include <new>
#include <string>

#include "commands.hpp"
#include "config.hpp"

// The opaque handle owns a parsed config by value.
struct kgsq_config {
    kgsq::RunConfig cfg;
};

namespace {

thread_local std::string g_last_error;

kgsq_status fail(const std::string& msg, kgsq_status code) {
    g_last_error = msg;
    return code;
}

template <typename Fn>
kgsq_status wrap_config_op(Fn&& body) {
    g_last_error.clear();
    try {
        return body();
    } catch (const kgsq::config_error& e) {
        return fail(e.what(), KGSQ_ERR_CONFIG);
    } catch (const std::exception& e) {
        return fail(e.what(), KGSQ_ERR_CONFIG);
    }
}

kgsq_status run(const kgsq_config* cfg, const char* out_dir, int threads,
                int (*command)(const kgsq::RunConfig&, const std::string&,
                               int)) {
    g_last_error.clear();
    if (!cfg) return fail("null config handle", KGSQ_ERR_CONFIG);
    const std::string dir = out_dir ? out_dir : "";
    const int code = command(cfg->cfg, dir, threads);
    if (code != 0) g_last_error = kgsq::cmd::last_message();
    switch (code) {
        case 0: return KGSQ_OK;
        case 2: return KGSQ_ERR_BLOWUP;
        case 3: return KGSQ_ERR_BUDGET;
        default: return KGSQ_ERR_CONFIG;
    }
}

}  // namespace

extern "C" {

const char* kgsq_version(void) { return "1.0.0"; }

const char* kgsq_last_error(void) { return g_last_error.c_str(); }

kgsq_status kgsq_config_load(const char* path, kgsq_config** out) {
    if (!out) return fail("null output pointer", KGSQ_ERR_CONFIG);
    *out = nullptr;
    if (!path) return fail("null config path", KGSQ_ERR_CONFIG);
    return wrap_config_op([&]() {
        auto* h = new kgsq_config{kgsq::load_config(path)};
        *out = h;
        return KGSQ_OK;
    });
}

kgsq_status kgsq_config_parse(const char* text, kgsq_config** out) {
    if (!out) return fail("null output pointer", KGSQ_ERR_CONFIG);
    *out = nullptr;
    if (!text) return fail("null config text", KGSQ_ERR_CONFIG);
    return wrap_config_op([&]() {
        auto* h = new kgsq_config{kgsq::parse_config(text)};
        *out = h;
        return KGSQ_OK;
    });
}

kgsq_status kgsq_config_new(kgsq_config** out) {
    if (!out) return fail("null output pointer", KGSQ_ERR_CONFIG);
    *out = nullptr;
    return wrap_config_op([&]() {
        *out = new kgsq_config{};
        return KGSQ_OK;
    });
}

kgsq_status kgsq_config_set(kgsq_config* cfg, const char* key,
                            const char* value) {
    if (!cfg) return fail("null config handle", KGSQ_ERR_CONFIG);
    if (!key || !value) return fail("null key or value", KGSQ_ERR_CONFIG);
    return wrap_config_op([&]() {
        kgsq::set_config_key(cfg->cfg, key, value);
        return KGSQ_OK;
    });
}

char* kgsq_config_serialize(const kgsq_config* cfg) {
    g_last_error.clear();
    if (!cfg) {
        g_last_error = "null config handle";
        return nullptr;
    }
    try {
        const std::string text = kgsq::serialize_config(cfg->cfg);
        char* s = static_cast<char*>(::operator new(text.size() + 1));
        std::memcpy(s, text.c_str(), text.size() + 1);
        return s;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return nullptr;
    }
}

void kgsq_string_free(char* s) { ::operator delete(s); }

void kgsq_config_free(kgsq_config* cfg) { delete cfg; }

kgsq_status kgsq_run_simulate(const kgsq_config* cfg, const char* out_dir,
                              int threads) {
    return run(cfg, out_dir, threads, kgsq::cmd::simulate);
}

kgsq_status kgsq_run_analyze_covariance(const kgsq_config* cfg,
                                        const char* out_dir, int threads) {
    return run(cfg, out_dir, threads, kgsq::cmd::analyze_covariance);
}

kgsq_status kgsq_run_convergence_study(const kgsq_config* cfg,
                                       const char* out_dir, int threads) {
    return run(cfg, out_dir, threads, kgsq::cmd::convergence_study);
}

kgsq_status kgsq_run_stability(const kgsq_config* cfg, const char* out_dir,
                               int threads) {
    return run(cfg, out_dir, threads, kgsq::cmd::stability);
}

kgsq_status kgsq_run_trilinear(const kgsq_config* cfg, const char* out_dir,
                               int threads) {
    return run(cfg, out_dir, threads, kgsq::cmd::trilinear);
}

kgsq_status kgsq_run_sample_noise(const kgsq_config* cfg, const char* out_dir,
                                  int threads) {
    return run(cfg, out_dir, threads, kgsq::cmd::sample_noise);
}

}  // extern "C"
