#include "scaffold/coco.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <json.hpp>

namespace scaffold {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw MissingField(key);
    return *it;
}

} // namespace

AnnotationSet parse_coco(const std::string& json_text,
                         const std::string& unit_category) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw MalformedJson(e.what());
    }
    if (!root.is_object()) throw MalformedJson("top level must be an object");

    AnnotationSet out;
    std::set<int> image_ids;
    for (const auto& j : require(root, "images")) {
        CocoImageEntry entry;
        entry.id = require(j, "id").get<int>();
        entry.file_name = require(j, "file_name").get<std::string>();
        entry.width = require(j, "width").get<int>();
        entry.height = require(j, "height").get<int>();
        out.images.push_back(entry);
        image_ids.insert(entry.id);
    }

    std::map<int, std::string> categories;
    for (const auto& j : require(root, "categories")) {
        categories[require(j, "id").get<int>()] =
            require(j, "name").get<std::string>();
    }

    std::set<int> region_ids;
    for (const auto& j : require(root, "annotations")) {
        UnitRegion region;
        region.id = require(j, "id").get<int>();
        region.image_id = require(j, "image_id").get<int>();
        if (!image_ids.count(region.image_id))
            throw DanglingImageRef("annotation " + std::to_string(region.id) +
                                   " references unknown image_id " +
                                   std::to_string(region.image_id));
        const int cat_id = require(j, "category_id").get<int>();
        auto cat = categories.find(cat_id);
        region.category = cat == categories.end() ? "" : cat->second;
        if (region.category != unit_category) continue;

        const auto& bbox = require(j, "bbox");
        if (!bbox.is_array() || bbox.size() != 4)
            throw MalformedJson("bbox must be [x,y,w,h]");
        region.bbox_x = bbox[0].get<double>();
        region.bbox_y = bbox[1].get<double>();
        region.bbox_w = bbox[2].get<double>();
        region.bbox_h = bbox[3].get<double>();

        const auto& seg = require(j, "segmentation");
        if (!seg.is_array() || seg.empty() || !seg[0].is_array())
            throw MalformedJson(
                "segmentation must be a polygon list; RLE masks are not "
                "supported");
        region.polygon = seg[0].get<std::vector<double>>();
        if (region.polygon.size() < 6 || region.polygon.size() % 2 != 0)
            throw MalformedJson("polygon needs at least 3 (x,y) vertices");

        if (!region_ids.insert(region.id).second)
            throw MalformedJson("duplicate annotation id " +
                                std::to_string(region.id));
        out.regions.push_back(std::move(region));
    }
    return out;
}

UnitMask rasterize_polygon(const UnitRegion& region, int width, int height) {
    const std::size_t n = region.polygon.size() / 2;
    auto px = [&](std::size_t i) { return region.polygon[2 * i]; };
    auto py = [&](std::size_t i) { return region.polygon[2 * i + 1]; };

    // Shoelace area to reject degenerate outlines.
    double area2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        area2 += px(i) * py(j) - px(j) * py(i);
    }
    if (std::abs(area2) < 1e-12)
        throw DegeneratePolygon("polygon has zero area");

    UnitMask mask;
    mask.width = width;
    mask.height = height;
    mask.inside.assign(static_cast<std::size_t>(width) * height, 0);

    std::vector<double> xs;
    bool any = false;
    for (int y = 0; y < height; ++y) {
        const double cy = y + 0.5;
        xs.clear();
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = (i + 1) % n;
            const double y0 = py(i), y1 = py(j);
            if ((y0 <= cy) == (y1 <= cy)) continue; // no crossing
            const double t = (cy - y0) / (y1 - y0);
            xs.push_back(px(i) + t * (px(j) - px(i)));
        }
        std::sort(xs.begin(), xs.end());
        // Even-odd: fill pixel centers between alternating crossings.
        for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
            int x_start = static_cast<int>(std::ceil(xs[k] - 0.5));
            int x_end = static_cast<int>(std::floor(xs[k + 1] - 0.5));
            // center x+0.5 in (xs[k], xs[k+1]]
            if (std::abs((x_end + 0.5) - xs[k + 1]) < 1e-12) --x_end;
            x_start = std::max(x_start, 0);
            x_end = std::min(x_end, width - 1);
            for (int x = x_start; x <= x_end; ++x) {
                mask.inside[static_cast<std::size_t>(y) * width + x] = 1;
                any = true;
            }
        }
    }
    if (!any) throw DegeneratePolygon("polygon covers no pixel centers");

    mask.bbox_x_min = width;
    mask.bbox_y_min = height;
    mask.bbox_x_max = -1;
    mask.bbox_y_max = -1;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            if (!mask.inside[static_cast<std::size_t>(y) * width + x]) continue;
            mask.bbox_x_min = std::min(mask.bbox_x_min, x);
            mask.bbox_y_min = std::min(mask.bbox_y_min, y);
            mask.bbox_x_max = std::max(mask.bbox_x_max, x);
            mask.bbox_y_max = std::max(mask.bbox_y_max, y);
        }
    }
    return mask;
}

std::pair<GrayImage, std::pair<int, int>> crop_unit(const GrayImage& img,
                                                    const UnitRegion& region) {
    const int x0 = std::max(0, static_cast<int>(std::floor(region.bbox_x)));
    const int y0 = std::max(0, static_cast<int>(std::floor(region.bbox_y)));
    const int x1 = std::min<int>(
        img.width,
        static_cast<int>(std::ceil(region.bbox_x + region.bbox_w)));
    const int y1 = std::min<int>(
        img.height,
        static_cast<int>(std::ceil(region.bbox_y + region.bbox_h)));
    if (x0 >= x1 || y0 >= y1)
        throw RegionOutsideImage("region " + std::to_string(region.id) +
                                 " does not intersect the image");
    GrayImage crop(x1 - x0, y1 - y0);
    for (int y = y0; y < y1; ++y) {
        std::copy_n(&img.data[static_cast<std::size_t>(y) * img.width + x0],
                    crop.width,
                    &crop.data[static_cast<std::size_t>(y - y0) * crop.width]);
    }
    return {std::move(crop), {x0, y0}};
}

} // namespace scaffold
