#pragma once

#include <string>
#include <utility>
#include <vector>

#include "scaffold/image.hpp"

namespace scaffold {

/// One annotated scaffold unit: polygon outline plus bounding box.
struct UnitRegion {
    int id = 0;
    int image_id = 0;
    std::vector<double> polygon; // flat x0,y0,x1,y1,... in pixels
    double bbox_x = 0, bbox_y = 0, bbox_w = 0, bbox_h = 0;
    std::string category;
};

struct CocoImageEntry {
    int id = 0;
    std::string file_name;
    int width = 0;
    int height = 0;
};

struct AnnotationSet {
    std::vector<CocoImageEntry> images;
    std::vector<UnitRegion> regions;
};

/// Parse the COCO-subset annotation JSON (images / annotations / categories).
/// Annotations whose category name differs from `unit_category` are dropped.
AnnotationSet parse_coco(const std::string& json_text,
                         const std::string& unit_category = "scaffold_unit");

/// Even-odd scanline fill; a pixel is inside iff its center is inside the
/// polygon under the even-odd rule.
UnitMask rasterize_polygon(const UnitRegion& region, int width, int height);

/// Crop the region's bbox (clipped to image bounds). The offset maps
/// crop-local coordinates back to image coordinates.
std::pair<GrayImage, std::pair<int, int>> crop_unit(const GrayImage& img,
                                                    const UnitRegion& region);

} // namespace scaffold
