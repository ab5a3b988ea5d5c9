import numpy as np
from sklearn.preprocessing import MinMaxScaler, StandardScaler
from sklearn.utils.validation import check_array

SCALERS = {
    "standard": StandardScaler,
    # clip trims the one-ulp overshoot that x * scale + offset can produce
    "minmax": lambda: MinMaxScaler(clip=True),
}


def make_scaler(scaler):
    """Return an unfitted scaler for ``"standard"`` or ``"minmax"``.

    Anything with ``fit_transform`` is passed through unchanged.
    """
    if hasattr(scaler, "fit_transform"):
        return scaler
    key = str(scaler).lower().replace("scaler", "").replace("_", "")
    try:
        return SCALERS[key]()
    except KeyError:
        raise ValueError(f"unknown scaler {scaler!r}; expected one of {sorted(SCALERS)}") from None


def standardize(m, scaler="standard"):
    """Scale each column independently.

    ``standard`` gives zero mean and unit population standard deviation,
    ``minmax`` maps each column onto [0, 1]. Constant columns become zero
    columns under both.
    """
    m = check_array(m, dtype=np.float64, ensure_2d=False)
    vector = m.ndim == 1
    if vector:
        m = m[:, None]
    out = make_scaler(scaler).fit_transform(m)
    out[:, np.ptp(m, axis=0) == 0] = 0.0
    return out.ravel() if vector else out
