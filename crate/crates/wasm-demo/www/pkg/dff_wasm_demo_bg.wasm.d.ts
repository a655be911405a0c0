/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_demo_free: (a: number, b: number) => void;
export const coc_curves: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const demo_estimate_at: (a: number, b: number, c: number) => number;
export const demo_estimate_rgba: (a: number) => [number, number];
export const demo_hypotheses: (a: number) => [number, number];
export const demo_in_bin_rate: (a: number) => number;
export const demo_new: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
export const demo_profile: (a: number, b: number, c: number) => [number, number];
export const demo_size: (a: number) => number;
export const demo_stack_len: (a: number) => number;
export const demo_stack_rgba: (a: number, b: number) => [number, number];
export const demo_truth_at: (a: number, b: number, c: number) => number;
export const demo_truth_rgba: (a: number) => [number, number];
export const focus_distances: (a: number, b: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
