#include "bootnet/augment.hpp"

#include <cmath>

#include "bootnet/errors.hpp"

namespace bootnet {

AugmentationConfig AugmentationConfig::neutral() {
    AugmentationConfig cfg;
    cfg.crop_min_fraction = 1.0;
    cfg.flip_probability = 0.0;
    cfg.brightness_delta = 0.0;
    cfg.contrast_low = 1.0;
    cfg.contrast_high = 1.0;
    cfg.noise_sigma = 0.0;
    return cfg;
}

void AugmentationConfig::validate() const {
    if (!(crop_min_fraction > 0.0 && crop_min_fraction <= 1.0)) {
        throw ValidationError("augment: crop_min_fraction must be in (0, 1]");
    }
    if (!(flip_probability >= 0.0 && flip_probability <= 1.0)) {
        throw ValidationError("augment: flip_probability must be in [0, 1]");
    }
    if (!(brightness_delta >= 0.0)) {
        throw ValidationError("augment: brightness_delta must be >= 0");
    }
    if (!(contrast_low > 0.0 && contrast_high > 0.0 && contrast_low <= contrast_high)) {
        throw ValidationError("augment: contrast range must be positive with low <= high");
    }
    if (!(noise_sigma >= 0.0)) {
        throw ValidationError("augment: noise_sigma must be >= 0");
    }
}

namespace {

// Bilinear sample of channel c at fractional (y, x); clamped borders.
double sample_bilinear(const Tensor& img, double y, double x, std::size_t c,
                       std::size_t h, std::size_t w, std::size_t channels) {
    const double yc = std::min(std::max(y, 0.0), static_cast<double>(h - 1));
    const double xc = std::min(std::max(x, 0.0), static_cast<double>(w - 1));
    const std::size_t y0 = static_cast<std::size_t>(yc);
    const std::size_t x0 = static_cast<std::size_t>(xc);
    const std::size_t y1 = std::min(y0 + 1, h - 1);
    const std::size_t x1 = std::min(x0 + 1, w - 1);
    const double fy = yc - static_cast<double>(y0);
    const double fx = xc - static_cast<double>(x0);
    auto px = [&](std::size_t yy, std::size_t xx) {
        return img[(yy * w + xx) * channels + c];
    };
    const double top = px(y0, x0) * (1.0 - fx) + px(y0, x1) * fx;
    const double bot = px(y1, x0) * (1.0 - fx) + px(y1, x1) * fx;
    return top * (1.0 - fy) + bot * fy;
}

}  // namespace

Tensor augment(const Tensor& x, const AugmentationConfig& cfg, Rng& rng) {
    cfg.validate();
    if (x.ndim() != 3) {
        throw ShapeError("augment: expected HxWxC image, got " + x.shape_str());
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= 0.0 && x[i] <= 1.0)) {
            throw ValidationError("augment: pixel value " + std::to_string(x[i]) +
                                  " outside [0, 1]");
        }
    }
    const std::size_t h = x.shape()[0], w = x.shape()[1], c = x.shape()[2];

    // Random crop of area fraction >= crop_min_fraction, resized back.
    Tensor out(x.shape());
    {
        const double frac = rng.uniform(cfg.crop_min_fraction, 1.0);
        const double side = std::sqrt(frac);
        const std::size_t ch = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::lround(side * static_cast<double>(h))));
        const std::size_t cw = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::lround(side * static_cast<double>(w))));
        const std::size_t top = static_cast<std::size_t>(rng.uniform_int(h - ch + 1));
        const std::size_t left = static_cast<std::size_t>(rng.uniform_int(w - cw + 1));
        const double sy = static_cast<double>(ch) / static_cast<double>(h);
        const double sx = static_cast<double>(cw) / static_cast<double>(w);
        for (std::size_t i = 0; i < h; ++i) {
            // Half-pixel-centre mapping: exact identity when ch == h.
            const double src_y =
                (static_cast<double>(i) + 0.5) * sy - 0.5 + static_cast<double>(top);
            for (std::size_t j = 0; j < w; ++j) {
                const double src_x =
                    (static_cast<double>(j) + 0.5) * sx - 0.5 + static_cast<double>(left);
                for (std::size_t k = 0; k < c; ++k) {
                    out[(i * w + j) * c + k] = sample_bilinear(x, src_y, src_x, k, h, w, c);
                }
            }
        }
    }

    // Horizontal flip.
    if (rng.uniform() < cfg.flip_probability) {
        for (std::size_t i = 0; i < h; ++i) {
            for (std::size_t j = 0; j < w / 2; ++j) {
                for (std::size_t k = 0; k < c; ++k) {
                    std::swap(out[(i * w + j) * c + k], out[(i * w + (w - 1 - j)) * c + k]);
                }
            }
        }
    }

    // Brightness shift.
    {
        const double delta = rng.uniform(-cfg.brightness_delta, cfg.brightness_delta);
        if (delta != 0.0) {
            for (std::size_t i = 0; i < out.size(); ++i) out[i] += delta;
        }
    }

    // Contrast about the image mean. The scale == 1 case is skipped so the
    // neutral config stays a bit-exact identity.
    {
        const double scale = rng.uniform(cfg.contrast_low, cfg.contrast_high);
        if (scale != 1.0) {
            double mean = 0.0;
            for (std::size_t i = 0; i < out.size(); ++i) mean += out[i];
            mean /= static_cast<double>(out.size());
            for (std::size_t i = 0; i < out.size(); ++i) {
                out[i] = mean + scale * (out[i] - mean);
            }
        }
    }

    // Additive Gaussian noise.
    if (cfg.noise_sigma > 0.0) {
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] += cfg.noise_sigma * rng.normal();
        }
    }

    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::min(std::max(out[i], 0.0), 1.0);
    }
    return out;
}

std::pair<Tensor, Tensor> make_view_pair(const Tensor& x, const AugmentationConfig& cfg,
                                         Rng& rng) {
    Rng first = rng.derive(0);
    Rng second = rng.derive(1);
    return {augment(x, cfg, first), augment(x, cfg, second)};
}

}  // namespace bootnet
