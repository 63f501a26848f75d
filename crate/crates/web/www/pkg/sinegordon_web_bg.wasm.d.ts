/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_simulation_free: (a: number, b: number) => void;
export const derivative_error: (a: number, b: number) => [number, number, number, number];
export const describe: (a: number, b: number) => [number, number, number, number];
export const scenario_names: () => [number, number];
export const simulation_advance: (a: number, b: number) => [number, number, number];
export const simulation_dt: (a: number) => number;
export const simulation_energy: (a: number) => [number, number, number];
export const simulation_exact_error: (a: number) => [number, number, number];
export const simulation_half_sine: (a: number) => [number, number];
export const simulation_new: (a: number, b: number, c: number, d: number) => [number, number, number];
export const simulation_nx: (a: number) => number;
export const simulation_ny: (a: number) => number;
export const simulation_ring_radius: (a: number) => [number, number, number];
export const simulation_time: (a: number) => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
