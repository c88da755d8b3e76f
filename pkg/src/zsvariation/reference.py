"""Published result tables, kept as fixtures for report rendering.

These numbers came from full-size model stacks and a real image benchmark.
Nothing in this package reproduces them; they only exercise the grid and
summary renderers with realistic values.
"""

# method -> (sml, cms, fid, clips)
SUMMARY = {
    "Avatar": (7.25, 0.46, 21.74, 24.29),
    "AdaIn": (7.86, 0.33, 19.95, 24.42),
    "Artflow": (6.95, 0.38, 18.45, 23.52),
    "styTR": (6.53, 0.45, 18.62, 23.33),
    "styleCLIP": (7.52, 0.44, 19.50, 20.74),
    "CLIPstyler": (8.39, 0.45, 23.67, 19.48),
    "TextInversion": (7.01, 0.42, 18.38, 24.92),
    "Dreambooth": (6.81, 0.29, 20.77, 26.41),
    "Ours": (6.36, 0.57, 17.03, 27.42),
}

# (input style, target style, method) -> (sml, cms, fid, clips); None marks a skipped pair
STYLE_TRANSFER_BASELINES = {
    ('ink-painting', 'realistic-oil', 'Ours'): (6.56, 0.813, 14.48, 24.37),
    ('ink-painting', 'realistic-oil', 'Avatar'): (7.72, 0.325, 17.61, 23.98),
    ('ink-painting', 'realistic-oil', 'AdaIn'): (7.15, 0.245, 16.32, 24.12),
    ('ink-painting', 'realistic-oil', 'Artflow'): (6.91, 0.357, 16.73, 25.72),
    ('ink-painting', 'realistic-oil', 'styTR'): (5.72, 0.163, 15.41, 23.41),
    ('ink-painting', 'abstract', 'Ours'): (5.01, 0.315, 18.35, 24.11),
    ('ink-painting', 'abstract', 'Avatar'): (8.06, 0.132, 22.78, 19.54),
    ('ink-painting', 'abstract', 'AdaIn'): (9.62, 0.095, 21.31, 18.96),
    ('ink-painting', 'abstract', 'Artflow'): (6.18, 0.119, 19.98, 19.12),
    ('ink-painting', 'abstract', 'styTR'): (7.45, 0.217, 20.64, 18.74),
    ('ink-painting', 'ink-painting', 'Ours'): (None, None, None, None),
    ('ink-painting', 'ink-painting', 'Avatar'): (None, None, None, None),
    ('ink-painting', 'ink-painting', 'AdaIn'): (None, None, None, None),
    ('ink-painting', 'ink-painting', 'Artflow'): (None, None, None, None),
    ('ink-painting', 'ink-painting', 'styTR'): (None, None, None, None),
    ('ink-painting', 'impression', 'Ours'): (7.23, 0.678, 16.91, 26.98),
    ('ink-painting', 'impression', 'Avatar'): (6.38, 0.275, 18.73, 23.57),
    ('ink-painting', 'impression', 'AdaIn'): (7.96, 0.193, 17.82, 23.61),
    ('ink-painting', 'impression', 'Artflow'): (8.01, 0.326, 14.55, 21.73),
    ('ink-painting', 'impression', 'styTR'): (6.12, 0.242, 15.76, 20.73),
    ('ink-painting', 'anime', 'Ours'): (6.95, 0.484, 15.43, 23.41),
    ('ink-painting', 'anime', 'Avatar'): (6.83, 0.254, 25.0, 26.73),
    ('ink-painting', 'anime', 'AdaIn'): (7.21, 0.14, 14.99, 25.66),
    ('ink-painting', 'anime', 'Artflow'): (6.55, 0.239, 18.76, 26.45),
    ('ink-painting', 'anime', 'styTR'): (5.97, 0.384, 22.32, 24.56),
    ('photo', 'realistic-oil', 'Ours'): (6.87, 0.672, 16.9, 29.68),
    ('photo', 'realistic-oil', 'Avatar'): (5.48, 0.817, 16.21, 27.43),
    ('photo', 'realistic-oil', 'AdaIn'): (6.01, 0.625, 20.78, 28.75),
    ('photo', 'realistic-oil', 'Artflow'): (6.27, 0.752, 18.89, 23.45),
    ('photo', 'realistic-oil', 'styTR'): (4.75, 0.801, 24.98, 28.69),
    ('photo', 'abstract', 'Ours'): (6.99, 0.432, 19.21, 28.43),
    ('photo', 'abstract', 'Avatar'): (8.35, 0.527, 26.56, 20.78),
    ('photo', 'abstract', 'AdaIn'): (9.15, 0.641, 26.34, 22.94),
    ('photo', 'abstract', 'Artflow'): (7.92, 0.146, 22.12, 21.11),
    ('photo', 'abstract', 'styTR'): (8.63, 0.599, 23.9, 21.39),
    ('photo', 'ink-painting', 'Ours'): (4.82, 0.514, 15.67, 29.41),
    ('photo', 'ink-painting', 'Avatar'): (5.91, 0.468, 22.09, 23.3),
    ('photo', 'ink-painting', 'AdaIn'): (5.25, 0.385, 20.89, 22.71),
    ('photo', 'ink-painting', 'Artflow'): (6.41, 0.548, 19.32, 20.19),
    ('photo', 'ink-painting', 'styTR'): (5.37, 0.624, 16.25, 22.49),
    ('photo', 'impression', 'Ours'): (7.74, 0.753, 17.98, 28.89),
    ('photo', 'impression', 'Avatar'): (6.42, 0.519, 26.78, 26.77),
    ('photo', 'impression', 'AdaIn'): (8.62, 0.456, 16.78, 24.59),
    ('photo', 'impression', 'Artflow'): (6.17, 0.62, 16.21, 26.21),
    ('photo', 'impression', 'styTR'): (5.86, 0.572, 14.78, 23.99),
    ('photo', 'anime', 'Ours'): (6.31, 0.581, 18.32, 27.33),
    ('photo', 'anime', 'Avatar'): (5.27, 0.622, 21.92, 28.93),
    ('photo', 'anime', 'AdaIn'): (6.29, 0.196, 21.33, 26.43),
    ('photo', 'anime', 'Artflow'): (5.88, 0.426, 15.43, 24.86),
    ('photo', 'anime', 'styTR'): (6.16, 0.728, 17.43, 25.52),
    ('anime', 'realistic-oil', 'Ours'): (6.41, 0.519, 15.79, 26.53),
    ('anime', 'realistic-oil', 'Avatar'): (8.26, 0.451, 18.91, 24.56),
    ('anime', 'realistic-oil', 'AdaIn'): (7.77, 0.426, 19.32, 26.87),
    ('anime', 'realistic-oil', 'Artflow'): (6.92, 0.525, 15.22, 25.43),
    ('anime', 'realistic-oil', 'styTR'): (7.12, 0.539, 14.76, 24.66),
    ('anime', 'abstract', 'Ours'): (6.48, 0.432, 19.32, 29.09),
    ('anime', 'abstract', 'Avatar'): (10.01, 0.513, 19.23, 21.35),
    ('anime', 'abstract', 'AdaIn'): (9.87, 0.289, 16.78, 22.04),
    ('anime', 'abstract', 'Artflow'): (8.51, 0.371, 22.45, 20.68),
    ('anime', 'abstract', 'styTR'): (9.66, 0.106, 20.89, 21.16),
    ('anime', 'ink-painting', 'Ours'): (5.52, 0.686, 18.91, 28.76),
    ('anime', 'ink-painting', 'Avatar'): (8.91, 0.364, 24.12, 21.45),
    ('anime', 'ink-painting', 'AdaIn'): (9.03, 0.239, 23.56, 24.33),
    ('anime', 'ink-painting', 'Artflow'): (7.84, 0.181, 21.01, 23.34),
    ('anime', 'ink-painting', 'styTR'): (6.69, 0.524, 19.24, 22.07),
    ('anime', 'impression', 'Ours'): (5.76, 0.586, 14.1, 29.47),
    ('anime', 'impression', 'Avatar'): (6.71, 0.653, 22.67, 27.33),
    ('anime', 'impression', 'AdaIn'): (8.3, 0.327, 23.12, 26.42),
    ('anime', 'impression', 'Artflow'): (6.72, 0.274, 19.21, 27.32),
    ('anime', 'impression', 'styTR'): (5.42, 0.295, 15.67, 25.88),
    ('anime', 'anime', 'Ours'): (None, None, None, None),
    ('anime', 'anime', 'Avatar'): (None, None, None, None),
    ('anime', 'anime', 'AdaIn'): (None, None, None, None),
    ('anime', 'anime', 'Artflow'): (None, None, None, None),
    ('anime', 'anime', 'styTR'): (None, None, None, None),
}
GENERATION_BASELINES = {
    ('photo', 'realistic-oil', 'Ours'): (6.87, 0.67, 16.9, 29.68),
    ('photo', 'realistic-oil', 'styleCLIP'): (7.23, 0.37, 18.58, 21.36),
    ('photo', 'realistic-oil', 'CLIPstyler'): (8.92, 0.57, 19.21, 20.01),
    ('photo', 'realistic-oil', 'TextInversion(SD)'): (7.63, 0.3, 19.21, 25.92),
    ('photo', 'realistic-oil', 'Dreambooth(SD)'): (6.25, 0.31, 19.99, 26.15),
    ('photo', 'impression', 'Ours'): (7.74, 0.75, 17.98, 28.89),
    ('photo', 'impression', 'styleCLIP'): (7.77, 0.51, 19.49, 20.82),
    ('photo', 'impression', 'CLIPstyler'): (9.67, 0.38, 21.63, 17.69),
    ('photo', 'impression', 'TextInversion(SD)'): (7.42, 0.58, 19.19, 24.52),
    ('photo', 'impression', 'Dreambooth(SD)'): (5.98, 0.22, 21.42, 27.56),
    ('photo', 'anime', 'Ours'): (6.31, 0.58, 18.32, 27.33),
    ('photo', 'anime', 'styleCLIP'): (7.56, 0.44, 20.49, 20.04),
    ('photo', 'anime', 'CLIPstyler'): (8.48, 0.4, 30.17, 20.74),
    ('photo', 'anime', 'TextInversion(SD)'): (5.98, 0.38, 20.04, 23.42),
    ('photo', 'anime', 'Dreambooth(SD)'): (8.2, 0.34, 20.9, 25.52),
}
