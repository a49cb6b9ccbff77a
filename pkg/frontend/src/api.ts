import type { DuelResult, ForgeResponse, SimulateRequest } from "./types.js";

export class ApiError extends Error {
  code: string;
  status: number;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.code = code;
    this.status = status;
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(path, init);
  if (!response.ok) {
    let code = "http_error";
    let message = `${response.status} ${response.statusText}`;
    try {
      const body = await response.json();
      if (body && body.error) {
        code = body.error.code ?? code;
        message = body.error.message ?? message;
      }
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(response.status, code, message);
  }
  return response.json() as Promise<T>;
}

function post<T>(path: string, body: unknown): Promise<T> {
  return request<T>(path, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  });
}

export function health(): Promise<{ status: string; model_id: string }> {
  return request("/api/health");
}

export function forgeSpell(prompt: string): Promise<ForgeResponse> {
  return post("/api/forge", { prompt });
}

export function simulate(body: SimulateRequest): Promise<DuelResult> {
  return post("/api/simulate", body);
}
