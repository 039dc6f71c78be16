#pragma once
// Structured check reports with a stable key order.

#include <json.hpp>
#include <string>

namespace dq {

using Json = nlohmann::ordered_json;

struct Report {
    std::string check;
    bool pass = true;
    int order = -1; // first failing order, or the verified order when passing
    std::string witness;
    Json detail = Json::object();

    Json to_json() const
    {
        Json j;
        j["check"] = check;
        j["order"] = order;
        j["witness"] = witness.empty() ? Json(nullptr) : Json(witness);
        j["status"] = pass ? "pass" : "fail";
        if (!detail.empty())
            j["detail"] = detail;
        return j;
    }
    void fail(int r, std::string w)
    {
        if (!pass)
            return;
        pass = false;
        order = r;
        witness = std::move(w);
    }
};

} // namespace dq
